#include "ecasim/engine/simulation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ecasim::engine {

SlotOutcome classify_slot(std::span<const Participant> attempts, const phy::DeliveryVerdict& verdict)
{
  SlotOutcome out;
  out.participants.assign(attempts.begin(), attempts.end());
  if (attempts.empty()) {
    out.kind = SlotKind::Empty;
  } else if (attempts.size() >= 2) {
    out.kind = SlotKind::Collision;
  } else if (verdict.success) {
    out.kind = SlotKind::Success;
    out.winner = attempts.front();
    out.delivered_mpdus = verdict.delivered_count;
  } else {
    out.kind = SlotKind::Error;
  }
  return out;
}

std::uint64_t replication_seed(std::uint64_t scenario_seed, int replication)
{
  return derive_seed(scenario_seed, {0x72657000ULL, static_cast<std::uint64_t>(replication)});
}

namespace {

enum : std::uint64_t { kTrafficStream = 3 };

traffic::Source make_source(SourceKind kind, const Scenario& s, std::uint64_t run_seed, int station, Ac ac)
{
  RandomStream rng(derive_seed(run_seed, {static_cast<std::uint64_t>(station), index(ac), kTrafficStream}));
  switch (kind) {
  case SourceKind::None: return traffic::NoSource{};
  case SourceKind::Saturated: return traffic::SaturatedSource{s.saturated};
  case SourceKind::Voice: return traffic::VoiceSource(s.voice, rng);
  case SourceKind::Video: return traffic::VideoSource(s.video, rng);
  }
  throw std::invalid_argument("unknown source kind");
}

} // namespace

Simulation::Simulation(const Scenario& scenario, int replication)
    : scenario_(scenario), run_seed_(replication_seed(scenario.seed, replication))
{
  scenario_.validate();
  if (replication < 0 || replication >= scenario_.replications) {
    throw std::invalid_argument("replication index " + std::to_string(replication) + " out of range");
  }
  stations_.reserve(scenario_.stations.size());
  for (std::size_t i = 0; i < scenario_.stations.size(); ++i) {
    const auto& spec = scenario_.stations[i];
    station::StationSetup setup;
    setup.id = static_cast<int>(i);
    setup.protocol = spec.protocol;
    setup.params = station::is_eca(spec.protocol) ? scenario_.eca_params : scenario_.edca_params;
    setup.eca = scenario_.eca;
    setup.run_seed = run_seed_;
    for (auto ac : kAllAcs) {
      setup.sources[index(ac)] = make_source(spec.sources[index(ac)], scenario_, run_seed_, setup.id, ac);
    }
    stations_.emplace_back(std::move(setup));
  }
  for (auto& st : stations_) {
    st.start(0.0);
  }
}

void Simulation::deliver_arrivals()
{
  for (auto& st : stations_) {
    st.deliver_arrivals(clock_.now_us);
  }
}

std::uint64_t Simulation::skip_empty_slots(double limit_us)
{
  deliver_arrivals();
  const double slot = scenario_.phy.empty_slot_us;
  long long k = station::Station::kNotReady;
  double next_arrival = traffic::kNever;
  for (const auto& st : stations_) {
    k = std::min<long long>(k, st.slots_until_ready());
    next_arrival = std::min(next_arrival, st.next_arrival_us());
  }
  // The slot starting at now + j * slot sees every arrival due by then.
  const auto slots_before = [&](double t) -> long long {
    if (!std::isfinite(t)) {
      return station::Station::kNotReady;
    }
    return std::max(0LL, static_cast<long long>(std::ceil((t - clock_.now_us) / slot)));
  };
  k = std::min({k, slots_before(next_arrival), slots_before(limit_us)});
  if (k <= 0) {
    return 0;
  }
  for (auto& st : stations_) {
    st.skip_empty_slots(static_cast<int>(k));
  }
  if (observer_) {
    SlotOutcome empty;
    for (long long j = 0; j < k; ++j) {
      observer_(empty, clock_.now_us + slot * static_cast<double>(j), slot);
    }
  }
  clock_.now_us += slot * static_cast<double>(k);
  clock_.slot_index += static_cast<std::uint64_t>(k);
  census_.empty += static_cast<std::uint64_t>(k);
  return static_cast<std::uint64_t>(k);
}

SlotOutcome Simulation::advance_slot()
{
  deliver_arrivals();
  const auto& phy = scenario_.phy;
  const auto mode = scenario_.access;

  std::vector<Participant> attempts;
  std::vector<const station::TransmissionUnit*> units;
  for (auto& st : stations_) {
    if (const auto* u = st.begin_slot(phy, mode)) {
      attempts.push_back({st.id(), u->ac});
      units.push_back(u);
    }
  }

  phy::DeliveryVerdict verdict{};
  if (attempts.size() == 1) {
    auto& st = stations_[static_cast<std::size_t>(attempts.front().station)];
    verdict = phy::apply_channel_errors(units.front()->mpdus.size(), phy::ErrorModel{scenario_.p_e},
                                        st.error_stream(attempts.front().ac));
  }
  SlotOutcome outcome = classify_slot(attempts, verdict);

  double duration = phy.empty_slot_us;
  switch (outcome.kind) {
  case SlotKind::Empty: break;
  case SlotKind::Success:
  case SlotKind::Error:
    duration = phy::success_duration_us(units.front()->airtime_us, units.front()->mpdus.size(), mode, phy);
    break;
  case SlotKind::Collision: {
    double longest = 0;
    for (const auto* u : units) {
      longest = std::max(longest, u->airtime_us);
    }
    duration = phy::collision_duration_us(longest, mode, phy);
    break;
  }
  }

  const double start = clock_.now_us;
  station::SlotFeedback common;
  common.busy = outcome.kind != SlotKind::Empty;
  common.end_us = start + duration;
  std::size_t next_attempt = 0;
  for (auto& st : stations_) {
    station::SlotFeedback fb = common;
    if (next_attempt < attempts.size() && attempts[next_attempt].station == st.id()) {
      ++next_attempt;
      switch (outcome.kind) {
      case SlotKind::Success:
        fb.outcome = station::OwnOutcome::Success;
        fb.verdict = verdict;
        break;
      case SlotKind::Error: fb.outcome = station::OwnOutcome::Error; break;
      case SlotKind::Collision: fb.outcome = station::OwnOutcome::Collision; break;
      case SlotKind::Empty: break;
      }
    }
    st.end_slot(fb);
  }

  clock_.now_us = common.end_us;
  ++clock_.slot_index;
  record(outcome, start, duration);
  return outcome;
}

void Simulation::record(const SlotOutcome& outcome, double start_us, double duration_us)
{
  switch (outcome.kind) {
  case SlotKind::Empty: ++census_.empty; break;
  case SlotKind::Success: ++census_.success; break;
  case SlotKind::Collision: ++census_.collision; break;
  case SlotKind::Error: ++census_.error; break;
  }
  if (outcome.kind != SlotKind::Empty) {
    busy_time_us_ += duration_us;
  }
  if (outcome.kind == SlotKind::Collision) {
    longest_collision_free_us_ = std::max(longest_collision_free_us_, start_us - collision_free_start_us_);
    collision_free_start_us_ = start_us + duration_us;
    last_collision_us_ = start_us;
  }
  if (outcome.kind == SlotKind::Collision || outcome.kind == SlotKind::Error) {
    last_failure_us_ = start_us;
  }
  if (observer_) {
    observer_(outcome, start_us, duration_us);
  }
}

void Simulation::run()
{
  const double end = scenario_.duration_s * 1e6;
  while (clock_.now_us < end) {
    skip_empty_slots(end);
    if (clock_.now_us >= end) {
      break;
    }
    advance_slot();
  }
}

RunResult Simulation::result() const
{
  RunResult r;
  r.run_seed = run_seed_;
  r.fingerprint = fingerprint(scenario_);
  r.duration_us = clock_.now_us;
  r.clock = clock_;
  r.census = census_;
  r.busy_time_us = busy_time_us_;
  r.last_collision_us = last_collision_us_;
  r.last_failure_us = last_failure_us_;
  r.longest_collision_free_us = std::max(longest_collision_free_us_, clock_.now_us - collision_free_start_us_);
  r.stations.reserve(stations_.size());
  for (const auto& st : stations_) {
    StationResult sr;
    sr.id = st.id();
    sr.protocol = st.protocol();
    for (auto ac : kAllAcs) {
      sr.active[index(ac)] = st.has_source(ac);
      sr.ac[index(ac)] = st.counters(ac);
    }
    sr.smart_backoff = st.smart_backoff_stats();
    r.stations.push_back(sr);
  }
  return r;
}

RunResult run_simulation(const Scenario& scenario, int replication)
{
  Simulation sim(scenario, replication);
  sim.run();
  return sim.result();
}

} // namespace ecasim::engine
