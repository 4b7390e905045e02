#pragma once

#include <optional>
#include <span>

#include "ecasim/mac/ac_params.hpp"
#include "ecasim/mac/ac_state.hpp"
#include "ecasim/mac/schedule_reset.hpp"
#include "ecasim/mac/smart_backoff.hpp"
#include "ecasim/random.hpp"

namespace ecasim::mac {

// EDCA -----------------------------------------------------------------------

/// Fresh contention state for an AC whose queue just became non-empty.
AcState edca_on_arrival(AcState state, const AcParams& params, RandomStream& rng);

/// ACK received: CW back to CW_min, new draw over [0, CW_min - 1].
AcState edca_on_success(AcState state, const AcParams& params, RandomStream& rng);

/// Real or virtual collision, or a missing ACK: CW doubles up to CW_max and the
/// counter is redrawn. Past the retry limit the unit is dropped and the state
/// resets as on success.
FailureTransition edca_on_failure(AcState state, const AcParams& params, RandomStream& rng);

// CSMA/ECA_QoS -----------------------------------------------------------------

struct EcaConfig
{
  bool hysteresis = true;      // keep k after a success
  bool smart_backoff = true;   // constrained draws instead of plain uniform ones
  SrTrigger sr_trigger = SrTrigger::Aggressive;
  SrReduction sr_reduction = SrReduction::Half;
  int stickiness = 1;          // failures tolerated on a deterministic backoff
  int stickiness_max = 2;      // level after an effective schedule reduction

  friend bool operator==(const EcaConfig&, const EcaConfig&) = default;
};

/// Random-mode draw over CW(k): Smart Backoff when enabled, uniform otherwise.
int eca_draw_backoff(const AcParams& params, int stage, const EcaConfig& config,
                     std::span<const SiblingCounter> siblings, RandomStream& rng, SmartBackoffStats* stats);

AcState eca_on_arrival(AcState state, const AcParams& params, const EcaConfig& config,
                       std::span<const SiblingCounter> siblings, RandomStream& rng, SmartBackoffStats* stats);

/// Success: retries cleared, stage kept (Hysteresis) and the counter set to
/// B_d(k). A pending schedule reduction to `sr_stage` is applied first and
/// raises the stickiness budget to stickiness_max.
AcState eca_on_success(AcState state, const AcParams& params, const EcaConfig& config,
                       std::optional<int> sr_stage = std::nullopt);

/// Failure: a deterministic AC with stickiness left keeps B_d(k); otherwise
/// k increments (clamped at m) and a random-mode backoff is drawn. Past the
/// retry limit the unit is dropped and contention restarts at stage 0.
FailureTransition eca_on_failure(AcState state, const AcParams& params, const EcaConfig& config,
                                 std::span<const SiblingCounter> siblings, RandomStream& rng,
                                 SmartBackoffStats* stats = nullptr);

/// MPDUs per access under Fair Share: 2^k.
int fair_share_count(int stage);

// Shared ---------------------------------------------------------------------

/// Queue drained after a delivery: CW back to CW_min, stage 0, AC leaves contention.
AcState on_queue_empty(AcState state, const AcParams& params);

} // namespace ecasim::mac
