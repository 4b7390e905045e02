#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ecasim/access_category.hpp"
#include "ecasim/mac/ac_params.hpp"
#include "ecasim/mac/ac_state.hpp"
#include "ecasim/mac/protocols.hpp"
#include "ecasim/mac/smart_backoff.hpp"
#include "ecasim/phy/phy.hpp"
#include "ecasim/random.hpp"
#include "ecasim/station/queue.hpp"
#include "ecasim/station/transmission.hpp"
#include "ecasim/traffic/sources.hpp"

namespace ecasim::station {

struct AcCounters
{
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t failures = 0; // collisions + errors
  std::uint64_t collisions = 0;
  std::uint64_t errors = 0;
  std::uint64_t virtual_collisions = 0;
  std::uint64_t retry_drops = 0;    // MPDUs discarded at the retry limit
  std::uint64_t overflow_drops = 0; // arrivals refused by a full queue
  std::uint64_t delivered_mpdus = 0;
  std::uint64_t delivered_bytes = 0;
  std::uint64_t offered_mpdus = 0;
  double delay_sum_us = 0;
  std::uint64_t delay_count = 0;
  double gap_sum_us = 0;
  std::uint64_t gap_count = 0;
  double last_success_us = -1;
  std::uint64_t sr_reductions = 0;
  std::uint64_t sr_vetoes = 0; // reductions refused because they would meet a sibling's schedule

  friend bool operator==(const AcCounters&, const AcCounters&) = default;
};

/// Result of a slot as seen by one station.
enum class OwnOutcome : std::uint8_t { Idle, Success, Collision, Error };

struct SlotFeedback
{
  bool busy = false;
  double end_us = 0; // time at which the slot ends
  OwnOutcome outcome = OwnOutcome::Idle;
  phy::DeliveryVerdict verdict{};
};

struct StationSetup
{
  int id = 0;
  Protocol protocol = Protocol::Edca;
  mac::AcParamSet params{};
  mac::EcaConfig eca{};
  std::array<traffic::Source, kNumAcs> sources{};
  std::uint64_t run_seed = 0;
};

class Station
{
public:
  static constexpr int kNotReady = std::numeric_limits<int>::max();

  explicit Station(StationSetup setup);

  int id() const noexcept { return id_; }
  Protocol protocol() const noexcept { return protocol_; }

  /// Fills saturated queues and draws the initial counters, VO first.
  void start(double now_us);

  /// Moves every emission due at or before now into the queues.
  void deliver_arrivals(double now_us);
  double next_arrival_us() const;

  /// Empty slots before the earliest of this station's ACs can attempt.
  int slots_until_ready() const;
  /// Applies k empty slots to every backlogged AC (k <= slots_until_ready()).
  void skip_empty_slots(int k);

  /// Picks this slot's transmitter, if any, resolving virtual collisions.
  /// The unit stays valid until end_slot().
  const TransmissionUnit* begin_slot(const phy::PhyParams& phy, phy::AccessMode mode);

  /// Counter updates for the slot that just ended, then the transmitter's and
  /// the virtual-collision losers' transitions.
  void end_slot(const SlotFeedback& feedback);

  /// Error-model stream of the transmitting AC.
  RandomStream& error_stream(Ac ac) { return error_rng_[index(ac)]; }

  const mac::AcState& state(Ac ac) const { return states_[index(ac)]; }
  const MacQueue& queue(Ac ac) const { return queues_[index(ac)]; }
  const mac::AcParams& params(Ac ac) const { return params_[index(ac)]; }
  const AcCounters& counters(Ac ac) const { return counters_[index(ac)]; }
  const mac::SmartBackoffStats& smart_backoff_stats() const { return sb_stats_; }
  bool is_saturated(Ac ac) const;
  bool has_source(Ac ac) const;

private:
  void on_arrival(Ac ac);
  void on_success(Ac ac, const SlotFeedback& fb);
  void on_failure(Ac ac, bool virtual_collision);
  void after_transmission(Ac ac);
  void decrement(mac::AcState& s, const mac::AcParams& p, bool busy);
  bool sr_enabled(Ac ac) const;
  void enqueue(Ac ac, std::uint32_t bytes, double t_us);

  int id_;
  Protocol protocol_;
  mac::EcaConfig eca_;
  mac::AcParamSet params_;
  std::array<mac::AcState, kNumAcs> states_{};
  std::array<MacQueue, kNumAcs> queues_{};
  std::array<traffic::Source, kNumAcs> sources_;
  std::array<RandomStream, kNumAcs> backoff_rng_;
  std::array<RandomStream, kNumAcs> error_rng_;
  std::array<AcCounters, kNumAcs> counters_{};
  mac::SmartBackoffStats sb_stats_{};

  std::optional<Ac> transmitter_;
  std::vector<Ac> losers_;
  TransmissionUnit unit_;
  const phy::PhyParams* phy_ = nullptr;
  phy::AccessMode mode_ = phy::AccessMode::BasicAccess;
};

} // namespace ecasim::station
