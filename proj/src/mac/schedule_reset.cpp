#include "ecasim/mac/schedule_reset.hpp"

#include <cassert>
#include <stdexcept>

#include "ecasim/mac/backoff.hpp"

namespace ecasim::mac {

void ScheduleBitmap::reset(std::size_t length)
{
  if (length > kMaxLength) {
    throw std::length_error("ScheduleBitmap: cycle longer than supported");
  }
  bits_.reset();
  length_ = length;
}

void ScheduleBitmap::mark(std::size_t position, bool busy)
{
  assert(position < length_);
  if (busy) {
    bits_.set(position);
  }
}

int sr_gamma(SrTrigger trigger, int max_stage, int stage)
{
  if (trigger == SrTrigger::Aggressive) {
    return 1;
  }
  return 1 << (max_stage - stage + 1);
}

void sr_begin_cycle(AcState& state, int deterministic_backoff)
{
  state.sr_bitmap.reset(static_cast<std::size_t>(deterministic_backoff) + 1);
  state.sr_bitmap.mark(0, true);
  state.sr_recording = true;
}

void sr_observe_slot(AcState& state, bool busy)
{
  if (!state.sr_recording || !state.deterministic) {
    return;
  }
  const int bd = static_cast<int>(state.sr_bitmap.size()) - 1;
  const int position = bd - state.backoff;
  if (position > 0 && position <= bd) {
    state.sr_bitmap.mark(static_cast<std::size_t>(position), busy);
  }
}

void sr_abort(AcState& state)
{
  state.sr_recording = false;
  state.sr_successes = 0;
}

namespace {

bool multiples_idle(const ScheduleBitmap& bitmap, std::size_t step)
{
  for (std::size_t pos = step; pos < bitmap.size(); pos += step) {
    if (bitmap.busy(pos)) {
      return false;
    }
  }
  return true;
}

} // namespace

std::optional<int> sr_evaluate(const ScheduleBitmap& bitmap, const AcParams& params, int stage, SrReduction mode)
{
  if (mode == SrReduction::Off || stage <= 0 || bitmap.size() < 2) {
    return std::nullopt;
  }
  const std::size_t cycle = bitmap.size();
  if (mode == SrReduction::Half) {
    const std::size_t step = (cycle + 1) / 2;
    if (multiples_idle(bitmap, step)) {
      return stage - 1;
    }
    return std::nullopt;
  }
  for (int candidate = 0; candidate < stage; ++candidate) {
    const auto step = static_cast<std::size_t>(deterministic_backoff(params, candidate)) + 1;
    if (cycle % step == 0 && multiples_idle(bitmap, step)) {
      return candidate;
    }
  }
  return std::nullopt;
}

} // namespace ecasim::mac
