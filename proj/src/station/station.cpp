#include "ecasim/station/station.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "ecasim/mac/backoff.hpp"
#include "ecasim/mac/schedule_reset.hpp"

namespace ecasim::station {

namespace {

enum StreamPurpose : std::uint64_t { kBackoffStream = 1, kErrorStream = 2 };

} // namespace

Station::Station(StationSetup setup)
    : id_(setup.id), protocol_(setup.protocol), eca_(setup.eca), params_(setup.params),
      sources_(std::move(setup.sources))
{
  for (auto ac : kAllAcs) {
    const auto i = index(ac);
    const auto sid = static_cast<std::uint64_t>(id_);
    backoff_rng_[i] = RandomStream(derive_seed(setup.run_seed, {sid, i, kBackoffStream}));
    error_rng_[i] = RandomStream(derive_seed(setup.run_seed, {sid, i, kErrorStream}));
    states_[i].cw_curr = params_[i].cw_min;
  }
}

bool Station::is_saturated(Ac ac) const
{
  return std::holds_alternative<traffic::SaturatedSource>(sources_[index(ac)]);
}

bool Station::has_source(Ac ac) const
{
  return !std::holds_alternative<traffic::NoSource>(sources_[index(ac)]);
}

bool Station::sr_enabled(Ac ac) const
{
  return is_eca(protocol_) && ac != Ac::BK && eca_.sr_reduction != mac::SrReduction::Off;
}

void Station::enqueue(Ac ac, std::uint32_t bytes, double t_us)
{
  auto& c = counters_[index(ac)];
  ++c.offered_mpdus;
  if (!queues_[index(ac)].push({bytes, t_us})) {
    ++c.overflow_drops;
  }
}

void Station::start(double now_us)
{
  for (auto ac : kAllAcs) {
    if (const auto* s = std::get_if<traffic::SaturatedSource>(&sources_[index(ac)])) {
      for (std::size_t n = 0; n < s->params.fill_packets; ++n) {
        enqueue(ac, s->params.payload_bytes, now_us);
      }
    }
  }
  for (auto ac : kAllAcs) {
    if (!queues_[index(ac)].empty()) {
      on_arrival(ac);
    }
  }
}

void Station::deliver_arrivals(double now_us)
{
  for (auto ac : kAllAcs) {
    auto& src = sources_[index(ac)];
    bool arrived = false;
    while (traffic::next_arrival_us(src) <= now_us) {
      traffic::Emission e = std::visit(
          [](auto& s) -> traffic::Emission {
            if constexpr (requires { s.pop(); }) {
              return s.pop();
            } else {
              return {};
            }
          },
          src);
      for (auto bytes : e.mpdus) {
        enqueue(ac, bytes, e.time_us);
      }
      arrived = true;
    }
    if (arrived && !states_[index(ac)].backlogged && !queues_[index(ac)].empty()) {
      on_arrival(ac);
    }
  }
}

double Station::next_arrival_us() const
{
  double t = traffic::kNever;
  for (const auto& src : sources_) {
    t = std::min(t, traffic::next_arrival_us(src));
  }
  return t;
}

void Station::on_arrival(Ac ac)
{
  const auto i = index(ac);
  if (protocol_ == Protocol::Edca) {
    states_[i] = mac::edca_on_arrival(states_[i], params_[i], backoff_rng_[i]);
  } else {
    const auto siblings = mac::sibling_counters(ac, states_, params_);
    states_[i] = mac::eca_on_arrival(states_[i], params_[i], eca_, siblings, backoff_rng_[i], &sb_stats_);
  }
}

int Station::slots_until_ready() const
{
  int best = kNotReady;
  for (const auto& s : states_) {
    if (s.backlogged) {
      best = std::min(best, s.aifs_freeze + s.backoff);
    }
  }
  return best;
}

void Station::skip_empty_slots(int k)
{
  if (k <= 0) {
    return;
  }
  for (auto& s : states_) {
    if (!s.backlogged) {
      continue;
    }
    const int f = std::min(s.aifs_freeze, k);
    s.aifs_freeze -= f;
    s.backoff -= k - f;
    assert(s.backoff >= 0);
  }
}

const TransmissionUnit* Station::begin_slot(const phy::PhyParams& phy, phy::AccessMode mode)
{
  transmitter_.reset();
  losers_.clear();
  std::array<Ac, kNumAcs> ready{};
  std::size_t n = 0;
  for (auto ac : kAllAcs) {
    const auto& s = states_[index(ac)];
    if (s.backlogged && s.backoff == 0 && s.aifs_freeze == 0) {
      ready[n++] = ac;
    }
  }
  if (n == 0) {
    return nullptr;
  }
  auto vc = resolve_virtual_collision(std::span<const Ac>(ready.data(), n));
  transmitter_ = vc.winner;
  losers_ = std::move(vc.losers);
  const auto i = index(vc.winner);
  unit_ = build_transmission(id_, vc.winner, aggregation_policy(protocol_, vc.winner), states_[i].stage, params_[i],
                             queues_[i], phy, mode);
  phy_ = &phy;
  mode_ = mode;
  return &unit_;
}

void Station::decrement(mac::AcState& s, const mac::AcParams& p, bool busy)
{
  if (busy) {
    s.aifs_freeze = mac::aifs_surplus_slots(p);
  }
  if (s.aifs_freeze > 0) {
    --s.aifs_freeze;
  } else if (s.backoff > 0) {
    --s.backoff;
  }
}

void Station::end_slot(const SlotFeedback& fb)
{
  for (auto ac : kAllAcs) {
    const auto i = index(ac);
    auto& s = states_[i];
    if (!s.backlogged || ac == transmitter_ || std::find(losers_.begin(), losers_.end(), ac) != losers_.end()) {
      continue;
    }
    decrement(s, params_[i], fb.busy);
    if (sr_enabled(ac)) {
      mac::sr_observe_slot(s, fb.busy);
    }
  }

  if (transmitter_) {
    const Ac ac = *transmitter_;
    auto& c = counters_[index(ac)];
    ++c.attempts;
    switch (fb.outcome) {
    case OwnOutcome::Success: on_success(ac, fb); break;
    case OwnOutcome::Collision:
      ++c.collisions;
      on_failure(ac, false);
      break;
    case OwnOutcome::Error:
      ++c.errors;
      on_failure(ac, false);
      break;
    case OwnOutcome::Idle: throw std::logic_error("end_slot: transmitter without outcome");
    }
  }
  for (auto ac : losers_) {
    on_failure(ac, true);
  }
  transmitter_.reset();
  losers_.clear();
}

void Station::on_success(Ac ac, const SlotFeedback& fb)
{
  const auto i = index(ac);
  auto& c = counters_[i];
  auto& q = queues_[i];
  auto& s = states_[i];
  const auto& p = params_[i];
  ++c.successes;

  std::vector<std::uint32_t> recycled;
  for (std::size_t k = unit_.mpdus.size(); k-- > 0;) {
    if ((fb.verdict.delivered_mask >> k) & 1U) {
      const Packet pkt = q.take(k);
      ++c.delivered_mpdus;
      c.delivered_bytes += pkt.bytes;
      c.delay_sum_us += fb.end_us - pkt.enqueue_us;
      ++c.delay_count;
      recycled.push_back(pkt.bytes);
    }
  }
  if (is_saturated(ac)) {
    for (auto it = recycled.rbegin(); it != recycled.rend(); ++it) {
      enqueue(ac, *it, fb.end_us);
    }
  }
  if (c.last_success_us >= 0) {
    c.gap_sum_us += fb.end_us - c.last_success_us;
    ++c.gap_count;
  }
  c.last_success_us = fb.end_us;

  if (protocol_ == Protocol::Edca) {
    s = mac::edca_on_success(s, p, backoff_rng_[i]);
  } else {
    std::optional<int> decision;
    const bool sr = sr_enabled(ac);
    if (sr && s.sr_recording && s.deterministic
        && s.sr_bitmap.size() == static_cast<std::size_t>(mac::deterministic_backoff(p, s.stage)) + 1) {
      ++s.sr_successes;
      if (s.sr_successes >= mac::sr_gamma(eca_.sr_trigger, p.max_stage, s.stage)) {
        decision = mac::sr_evaluate(s.sr_bitmap, p, s.stage, eca_.sr_reduction);
        if (decision && eca_.smart_backoff) {
          const int bd = mac::deterministic_backoff(p, *decision);
          const auto siblings = mac::sibling_counters(ac, states_, params_);
          if (!mac::cycle_compatible(bd, bd, siblings)) {
            ++c.sr_vetoes;
            decision.reset();
          }
        }
        if (decision) {
          ++c.sr_reductions;
        }
        mac::sr_abort(s);
      }
    }
    s = mac::eca_on_success(s, p, eca_, decision);
    if (sr && (!s.sr_recording || s.sr_bitmap.size() != static_cast<std::size_t>(s.backoff) + 1)) {
      mac::sr_begin_cycle(s, s.backoff);
      s.sr_successes = 0;
    }
  }
  after_transmission(ac);
}

void Station::on_failure(Ac ac, bool virtual_collision)
{
  const auto i = index(ac);
  auto& c = counters_[i];
  auto& s = states_[i];
  const auto& p = params_[i];
  if (virtual_collision) {
    ++c.virtual_collisions;
  } else {
    ++c.failures;
  }

  std::size_t unit_size = unit_.mpdus.size();
  if (ac != transmitter_) {
    unit_size = build_transmission(id_, ac, aggregation_policy(protocol_, ac), s.stage, p, queues_[i], *phy_, mode_)
                    .mpdus.size();
  }

  mac::FailureTransition ft;
  if (protocol_ == Protocol::Edca) {
    ft = mac::edca_on_failure(s, p, backoff_rng_[i]);
  } else {
    const auto siblings = mac::sibling_counters(ac, states_, params_);
    ft = mac::eca_on_failure(s, p, eca_, siblings, backoff_rng_[i], &sb_stats_);
  }
  s = ft.state;

  if (ft.dropped) {
    auto& q = queues_[i];
    for (std::size_t k = 0; k < unit_size && !q.empty(); ++k) {
      const Packet pkt = q.pop_front();
      ++c.retry_drops;
      if (is_saturated(ac)) {
        enqueue(ac, pkt.bytes, pkt.enqueue_us);
      }
    }
  }
  after_transmission(ac);
}

void Station::after_transmission(Ac ac)
{
  const auto i = index(ac);
  auto& s = states_[i];
  if (queues_[i].empty()) {
    s = mac::on_queue_empty(s, params_[i]);
    return;
  }
  s.aifs_freeze = mac::aifs_surplus_slots(params_[i]);
}

} // namespace ecasim::station
