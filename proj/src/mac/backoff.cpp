#include "ecasim/mac/backoff.hpp"

#include <algorithm>

namespace ecasim::mac {

int contention_window(const AcParams& params, int stage) { return params.cw_min << stage; }

int draw_random_backoff(const AcParams& params, int stage, RandomStream& rng)
{
  return static_cast<int>(rng.uniform_int(0, contention_window(params, stage) - 1));
}

int deterministic_backoff(const AcParams& params, int stage)
{
  const int cw = contention_window(params, stage);
  return (cw + 1) / 2 - 1;
}

double aifs_duration_us(const AcParams& params, double sifs_us, double slot_us)
{
  return sifs_us + slot_us * (params.aifsn - 1);
}

int aifs_surplus_slots(const AcParams& params) { return std::max(0, params.aifsn - kDifsAifsn); }

} // namespace ecasim::mac
