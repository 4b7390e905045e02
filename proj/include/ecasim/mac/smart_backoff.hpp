#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ecasim/access_category.hpp"
#include "ecasim/mac/ac_params.hpp"
#include "ecasim/mac/ac_state.hpp"
#include "ecasim/random.hpp"

namespace ecasim::mac {

/// What a drawing AC needs to know about one backlogged sibling.
struct SiblingCounter
{
  int backoff = 0;               // B[j]
  int deterministic_backoff = 0; // B_d[j] at j's current stage
};

/// Diagnostics on how each draw was satisfied.
struct SmartBackoffStats
{
  std::uint64_t draws = 0;
  std::uint64_t cycle_constraint_relaxed = 0; // only the counter/modulus rule could be met
  std::uint64_t modulus_constraint_relaxed = 0; // only the cycle rule could be met
  std::uint64_t uniform_fallbacks = 0;          // nothing satisfiable; plain uniform draw

  friend bool operator==(const SmartBackoffStats&, const SmartBackoffStats&) = default;

  SmartBackoffStats& operator+=(const SmartBackoffStats& o)
  {
    draws += o.draws;
    cycle_constraint_relaxed += o.cycle_constraint_relaxed;
    modulus_constraint_relaxed += o.modulus_constraint_relaxed;
    uniform_fallbacks += o.uniform_fallbacks;
    return *this;
  }
};

/// Counter/modulus rule: B != B[j] and |B - B[j]| mod min(B_d, B_d[j]) != 0 for
/// every sibling. A zero modulus leaves only the inequality.
bool satisfies_smart_constraints(int candidate, int own_bd, std::span<const SiblingCounter> siblings);

/// Cycle rule: the two periodic schedules (periods B_d + 1 and B_d[j] + 1,
/// both powers of two here) never meet, i.e. B - B[j] is not a multiple of
/// min(B_d, B_d[j]) + 1.
bool cycle_compatible(int candidate, int own_bd, std::span<const SiblingCounter> siblings);

/// Draws B in [0, window - 1] uniformly among the values meeting both rules.
/// If none exist, the counter/modulus rule alone is used, then the cycle rule
/// alone, then a plain uniform draw. Every step is an exhaustive enumeration.
int smart_backoff(int window, int own_bd, std::span<const SiblingCounter> siblings, RandomStream& rng,
                  SmartBackoffStats* stats = nullptr);

/// Collects the backlogged siblings of `target`.
std::vector<SiblingCounter> sibling_counters(Ac target, const std::array<AcState, kNumAcs>& states,
                                             const AcParamSet& params);

/// Smart Backoff for AC `target` at `stage`, constrained by its backlogged siblings.
int smart_backoff(Ac target, const std::array<AcState, kNumAcs>& states, const AcParamSet& params, int stage,
                  RandomStream& rng, SmartBackoffStats* stats = nullptr);

} // namespace ecasim::mac
