#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>

namespace ecasim::station {

inline constexpr std::size_t kQueueCapacity = 1000;

struct Packet
{
  std::uint32_t bytes = 0;
  double enqueue_us = 0;
};

/// Bounded FIFO MAC queue. A full queue drops the arriving packet.
class MacQueue
{
public:
  MacQueue() = default;
  explicit MacQueue(std::size_t capacity) : capacity_(capacity) {}

  /// False (and one more drop) when the queue is full.
  bool push(Packet p)
  {
    if (entries_.size() >= capacity_) {
      ++drops_;
      return false;
    }
    entries_.push_back(p);
    return true;
  }

  const Packet& operator[](std::size_t i) const { return entries_[i]; }
  const Packet& front() const { return entries_.front(); }
  Packet pop_front()
  {
    Packet p = entries_.front();
    entries_.pop_front();
    return p;
  }
  /// Removes the packet at position i, keeping the order of the others.
  Packet take(std::size_t i)
  {
    Packet p = entries_[i];
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(i));
    return p;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::uint64_t drops() const noexcept { return drops_; }

private:
  std::size_t capacity_ = kQueueCapacity;
  std::deque<Packet> entries_;
  std::uint64_t drops_ = 0;
};

} // namespace ecasim::station
