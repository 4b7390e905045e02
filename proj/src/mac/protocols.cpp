#include "ecasim/mac/protocols.hpp"

#include <algorithm>

#include "ecasim/mac/backoff.hpp"

namespace ecasim::mac {

namespace {

int stage_of_cw(const AcParams& params, int cw)
{
  int k = 0;
  while ((params.cw_min << (k + 1)) <= cw) {
    ++k;
  }
  return k;
}

} // namespace

AcState edca_on_arrival(AcState state, const AcParams& params, RandomStream& rng)
{
  state.backlogged = true;
  state.deterministic = false;
  state.cw_curr = params.cw_min;
  state.stage = 0;
  state.retries = 0;
  state.backoff = draw_random_backoff(params, 0, rng);
  state.aifs_freeze = aifs_surplus_slots(params);
  return state;
}

AcState edca_on_success(AcState state, const AcParams& params, RandomStream& rng)
{
  state.cw_curr = params.cw_min;
  state.stage = 0;
  state.retries = 0;
  state.deterministic = false;
  state.backoff = draw_random_backoff(params, 0, rng);
  return state;
}

FailureTransition edca_on_failure(AcState state, const AcParams& params, RandomStream& rng)
{
  ++state.retries;
  if (state.retries > kMaxRetries) {
    return {edca_on_success(state, params, rng), true};
  }
  state.cw_curr = std::min(2 * state.cw_curr, params.cw_max);
  state.stage = stage_of_cw(params, state.cw_curr);
  state.backoff = static_cast<int>(rng.uniform_int(0, state.cw_curr - 1));
  return {state, false};
}

int eca_draw_backoff(const AcParams& params, int stage, const EcaConfig& config,
                     std::span<const SiblingCounter> siblings, RandomStream& rng, SmartBackoffStats* stats)
{
  if (config.smart_backoff) {
    return smart_backoff(contention_window(params, stage), deterministic_backoff(params, stage), siblings, rng,
                         stats);
  }
  return draw_random_backoff(params, stage, rng);
}

AcState eca_on_arrival(AcState state, const AcParams& params, const EcaConfig& config,
                       std::span<const SiblingCounter> siblings, RandomStream& rng, SmartBackoffStats* stats)
{
  state.backlogged = true;
  state.deterministic = false;
  state.stage = 0;
  state.cw_curr = params.cw_min;
  state.retries = 0;
  state.stickiness_left = config.stickiness;
  state.aifs_freeze = aifs_surplus_slots(params);
  sr_abort(state);
  state.backoff = eca_draw_backoff(params, 0, config, siblings, rng, stats);
  return state;
}

AcState eca_on_success(AcState state, const AcParams& params, const EcaConfig& config, std::optional<int> sr_stage)
{
  state.retries = 0;
  if (!config.hysteresis) {
    state.stage = 0;
  }
  if (sr_stage && *sr_stage < state.stage) {
    state.stage = std::max(0, *sr_stage);
    state.stickiness_left = config.stickiness_max;
  } else {
    state.stickiness_left = config.stickiness;
  }
  state.cw_curr = contention_window(params, state.stage);
  state.backoff = deterministic_backoff(params, state.stage);
  state.deterministic = true;
  return state;
}

FailureTransition eca_on_failure(AcState state, const AcParams& params, const EcaConfig& config,
                                 std::span<const SiblingCounter> siblings, RandomStream& rng,
                                 SmartBackoffStats* stats)
{
  sr_abort(state);
  if (state.deterministic && state.stickiness_left > 0) {
    --state.stickiness_left;
    state.backoff = deterministic_backoff(params, state.stage);
    return {state, false};
  }
  state.deterministic = false;
  state.stage = std::min(state.stage + 1, params.max_stage);
  ++state.retries;
  bool dropped = false;
  if (state.retries > kMaxRetries) {
    dropped = true;
    state.stage = 0;
    state.retries = 0;
    state.stickiness_left = config.stickiness;
  }
  state.cw_curr = contention_window(params, state.stage);
  state.backoff = eca_draw_backoff(params, state.stage, config, siblings, rng, stats);
  return {state, dropped};
}

int fair_share_count(int stage) { return 1 << stage; }

AcState on_queue_empty(AcState state, const AcParams& params)
{
  state.backlogged = false;
  state.deterministic = false;
  state.stage = 0;
  state.cw_curr = params.cw_min;
  state.retries = 0;
  state.backoff = 0;
  state.aifs_freeze = 0;
  sr_abort(state);
  return state;
}

} // namespace ecasim::mac
