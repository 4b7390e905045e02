#include "ecasim/mac/ac_params.hpp"

#include "ecasim/mac/backoff.hpp"

namespace ecasim::mac {

AcParams make_params(int cw_min, int cw_max, int max_stage, int aifsn, double txop_limit_us, int priority_rank)
{
  AcParams p;
  p.cw_min = cw_min;
  p.cw_max = cw_max;
  p.max_stage = max_stage;
  p.aifsn = aifsn;
  p.txop_limit_us = txop_limit_us;
  p.priority_rank = priority_rank;
  p.bd_lowest = deterministic_backoff(p, 0);
  p.bd_highest = deterministic_backoff(p, max_stage);
  return p;
}

namespace presets {

AcParams edca(Ac ac)
{
  switch (ac) {
  case Ac::BK: return make_params(32, 1024, 5, 8, 0.0, 1);
  case Ac::BE: return make_params(32, 1024, 5, 4, 0.0, 2);
  case Ac::VI: return make_params(16, 32, 1, 3, 3008.0, 3);
  case Ac::VO: return make_params(8, 16, 1, 3, 1504.0, 4);
  }
  return {};
}

AcParams edca_legacy() { return make_params(16, 1024, 5, 3, 0.0, 0); }

AcParams eca(Ac ac)
{
  switch (ac) {
  case Ac::BK: return make_params(32, 1024, 5, kDifsAifsn, 0.0, 1);
  case Ac::BE: return make_params(32, 1024, 5, kDifsAifsn, 0.0, 2);
  case Ac::VI: return make_params(16, 512, 5, kDifsAifsn, 3008.0, 3);
  case Ac::VO: return make_params(8, 256, 5, kDifsAifsn, 1504.0, 4);
  }
  return {};
}

AcParams eca_legacy() { return make_params(32, 1024, 5, kDifsAifsn, 0.0, 0); }

AcParamSet edca_all() { return {edca(Ac::VO), edca(Ac::VI), edca(Ac::BE), edca(Ac::BK)}; }

AcParamSet eca_all() { return {eca(Ac::VO), eca(Ac::VI), eca(Ac::BE), eca(Ac::BK)}; }

} // namespace presets

} // namespace ecasim::mac
