#pragma once

#include <cstdint>
#include <optional>

#include "ecasim/mac/ac_params.hpp"
#include "ecasim/mac/ac_state.hpp"

namespace ecasim::mac {

/// When the bitmap is evaluated: after every cycle (gamma = 1) or after
/// 2^(m-k+1) consecutive successes.
enum class SrTrigger : std::uint8_t { Aggressive, Conservative };

/// Which reductions are allowed once the bitmap is evaluated.
enum class SrReduction : std::uint8_t { Half, Smaller, Off };

int sr_gamma(SrTrigger trigger, int max_stage, int stage);

/// Starts a fresh cycle record of B_d + 1 slots; position 0 (own slot) is busy.
void sr_begin_cycle(AcState& state, int deterministic_backoff);

/// Folds one observed slot into the bitmap. The position is derived from the
/// counter after this slot's decrement: B_d - backoff. No-op unless recording.
void sr_observe_slot(AcState& state, bool busy);

/// Drops the partial record; consecutive-success counting restarts.
void sr_abort(AcState& state);

/// Returns the stage the current schedule can shrink to, if any.
///  Half:    k - 1 when every non-zero multiple of ceil((B_d+1)/2) is idle.
///  Smaller: the smallest k* < k whose cycle B_d(k*)+1 divides B_d+1 and
///           whose non-zero multiples are all idle.
std::optional<int> sr_evaluate(const ScheduleBitmap& bitmap, const AcParams& params, int stage, SrReduction mode);

} // namespace ecasim::mac
