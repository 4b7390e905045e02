#include "ecasim/mac/smart_backoff.hpp"

#include <algorithm>
#include <cstdlib>

#include "ecasim/mac/backoff.hpp"

namespace ecasim::mac {

bool satisfies_smart_constraints(int candidate, int own_bd, std::span<const SiblingCounter> siblings)
{
  for (const auto& s : siblings) {
    if (candidate == s.backoff) {
      return false;
    }
    const int modulus = std::min(own_bd, s.deterministic_backoff);
    if (modulus > 0 && std::abs(candidate - s.backoff) % modulus == 0) {
      return false;
    }
  }
  return true;
}

bool cycle_compatible(int candidate, int own_bd, std::span<const SiblingCounter> siblings)
{
  for (const auto& s : siblings) {
    const int period = std::min(own_bd, s.deterministic_backoff) + 1;
    if (std::abs(candidate - s.backoff) % period == 0) {
      return false;
    }
  }
  return true;
}

namespace {

/// Uniform pick among the window values accepted by `ok`, or -1 when none are.
template <typename Pred>
int pick_uniform(int window, Pred ok, RandomStream& rng)
{
  int count = 0;
  for (int b = 0; b < window; ++b) {
    count += ok(b) ? 1 : 0;
  }
  if (count == 0) {
    return -1;
  }
  auto nth = rng.uniform_int(0, count - 1);
  for (int b = 0; b < window; ++b) {
    if (ok(b) && nth-- == 0) {
      return b;
    }
  }
  return -1;
}

} // namespace

int smart_backoff(int window, int own_bd, std::span<const SiblingCounter> siblings, RandomStream& rng,
                  SmartBackoffStats* stats)
{
  SmartBackoffStats local;
  SmartBackoffStats& st = stats ? *stats : local;
  ++st.draws;

  int b = pick_uniform(
      window,
      [&](int c) {
        return satisfies_smart_constraints(c, own_bd, siblings) && cycle_compatible(c, own_bd, siblings);
      },
      rng);
  if (b >= 0) {
    return b;
  }
  b = pick_uniform(window, [&](int c) { return satisfies_smart_constraints(c, own_bd, siblings); }, rng);
  if (b >= 0) {
    ++st.cycle_constraint_relaxed;
    return b;
  }
  b = pick_uniform(window, [&](int c) { return cycle_compatible(c, own_bd, siblings); }, rng);
  if (b >= 0) {
    ++st.modulus_constraint_relaxed;
    return b;
  }
  ++st.uniform_fallbacks;
  return static_cast<int>(rng.uniform_int(0, window - 1));
}

std::vector<SiblingCounter> sibling_counters(Ac target, const std::array<AcState, kNumAcs>& states,
                                             const AcParamSet& params)
{
  std::vector<SiblingCounter> out;
  out.reserve(kNumAcs - 1);
  for (auto ac : kAllAcs) {
    const auto& s = states[index(ac)];
    if (ac == target || !s.backlogged) {
      continue;
    }
    out.push_back({s.backoff, deterministic_backoff(params[index(ac)], s.stage)});
  }
  return out;
}

int smart_backoff(Ac target, const std::array<AcState, kNumAcs>& states, const AcParamSet& params, int stage,
                  RandomStream& rng, SmartBackoffStats* stats)
{
  const auto& p = params[index(target)];
  const auto siblings = sibling_counters(target, states, params);
  return smart_backoff(contention_window(p, stage), deterministic_backoff(p, stage), siblings, rng, stats);
}

} // namespace ecasim::mac
