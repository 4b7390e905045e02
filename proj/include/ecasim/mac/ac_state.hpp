#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>

namespace ecasim::mac {

/// Busy/idle record of the slots in one deterministic cycle, position 0 being
/// the owner's own transmission slot.
class ScheduleBitmap
{
public:
  static constexpr std::size_t kMaxLength = 2048;

  ScheduleBitmap() = default;
  explicit ScheduleBitmap(std::size_t length) { reset(length); }

  void reset(std::size_t length);
  void mark(std::size_t position, bool busy);
  bool busy(std::size_t position) const { return bits_.test(position); }
  std::size_t size() const noexcept { return length_; }

  friend bool operator==(const ScheduleBitmap&, const ScheduleBitmap&) = default;

private:
  std::bitset<kMaxLength> bits_;
  std::size_t length_ = 0;
};

/// Mutable contention state of one access category.
struct AcState
{
  int backoff = 0;        // B, slots remaining
  int stage = 0;          // k in [0, m]
  int cw_curr = 0;
  bool deterministic = false;
  int stickiness_left = 0;
  int retries = 0;
  int aifs_freeze = 0;    // idle slots still owed to AIFS before counting down
  bool backlogged = false;

  ScheduleBitmap sr_bitmap;
  bool sr_recording = false; // bitmap covers the current cycle
  int sr_successes = 0;      // consecutive successes folded into the bitmap

  friend bool operator==(const AcState&, const AcState&) = default;
};

/// Result of a failure transition; dropped means the head-of-line unit hit the retry limit.
struct FailureTransition
{
  AcState state;
  bool dropped = false;
};

} // namespace ecasim::mac
