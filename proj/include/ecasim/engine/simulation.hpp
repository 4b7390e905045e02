#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ecasim/access_category.hpp"
#include "ecasim/engine/scenario.hpp"
#include "ecasim/mac/smart_backoff.hpp"
#include "ecasim/phy/phy.hpp"
#include "ecasim/station/station.hpp"

namespace ecasim::engine {

struct SimClock
{
  double now_us = 0;
  std::uint64_t slot_index = 0;
  friend bool operator==(const SimClock&, const SimClock&) = default;
};

/// A single attempt that failed only because of channel errors is an Error
/// slot, kept apart from Success so that every Success slot delivers data.
enum class SlotKind : std::uint8_t { Empty, Success, Collision, Error };

struct Participant
{
  int station = 0;
  Ac ac = Ac::BE;
  friend bool operator==(const Participant&, const Participant&) = default;
};

struct SlotOutcome
{
  SlotKind kind = SlotKind::Empty;
  std::optional<Participant> winner;
  std::size_t delivered_mpdus = 0;
  std::vector<Participant> participants;
};

/// Classifies one slot from the attempts that survived virtual-collision
/// resolution. `verdict` is the channel-error outcome of a lone attempt and
/// is ignored otherwise.
SlotOutcome classify_slot(std::span<const Participant> attempts, const phy::DeliveryVerdict& verdict);

struct SlotCensus
{
  std::uint64_t empty = 0;
  std::uint64_t success = 0;
  std::uint64_t collision = 0;
  std::uint64_t error = 0;

  std::uint64_t total() const noexcept { return empty + success + collision + error; }
  friend bool operator==(const SlotCensus&, const SlotCensus&) = default;
};

struct StationResult
{
  int id = 0;
  station::Protocol protocol = station::Protocol::Edca;
  std::array<bool, kNumAcs> active{}; // AC has a traffic source
  std::array<station::AcCounters, kNumAcs> ac{};
  mac::SmartBackoffStats smart_backoff{};
  friend bool operator==(const StationResult&, const StationResult&) = default;
};

struct RunResult
{
  std::uint64_t run_seed = 0;
  std::uint64_t fingerprint = 0;
  double duration_us = 0;
  SimClock clock{};
  SlotCensus census{};
  double busy_time_us = 0; // channel time of non-empty slots
  double last_collision_us = -1; // start of the last collision slot, -1 if none
  double last_failure_us = -1;   // start of the last collision or error slot
  double longest_collision_free_us = 0;
  std::vector<StationResult> stations;
  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Derives the seed of replication r from the scenario seed.
std::uint64_t replication_seed(std::uint64_t scenario_seed, int replication);

/// One replication of a scenario, advanced slot by slot.
class Simulation
{
public:
  using SlotObserver = std::function<void(const SlotOutcome&, double start_us, double duration_us)>;

  Simulation(const Scenario& scenario, int replication);

  /// Processes due arrivals, then resolves one slot.
  SlotOutcome advance_slot();
  /// Advances over the empty slots before the next attempt or arrival, never
  /// past `limit_us`. Returns the number of slots skipped.
  std::uint64_t skip_empty_slots(double limit_us);
  /// Runs to the scenario duration.
  void run();

  const SimClock& clock() const noexcept { return clock_; }
  const SlotCensus& census() const noexcept { return census_; }
  std::span<const station::Station> stations() const noexcept { return stations_; }
  void set_observer(SlotObserver obs) { observer_ = std::move(obs); }

  RunResult result() const;

private:
  void deliver_arrivals();
  void record(const SlotOutcome& outcome, double start_us, double duration_us);

  Scenario scenario_;
  std::uint64_t run_seed_;
  SimClock clock_{};
  SlotCensus census_{};
  double busy_time_us_ = 0;
  double last_collision_us_ = -1;
  double last_failure_us_ = -1;
  double collision_free_start_us_ = 0;
  double longest_collision_free_us_ = 0;
  std::vector<station::Station> stations_;
  SlotObserver observer_;
};

/// Runs replication `replication` of `scenario` to completion.
/// Throws std::invalid_argument for an invalid scenario or replication index.
RunResult run_simulation(const Scenario& scenario, int replication);

} // namespace ecasim::engine
