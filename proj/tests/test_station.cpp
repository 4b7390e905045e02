#include <gtest/gtest.h>

#include "ecasim/mac/backoff.hpp"
#include "ecasim/station/queue.hpp"
#include "ecasim/station/station.hpp"
#include "ecasim/station/transmission.hpp"

using namespace ecasim;
using namespace ecasim::station;

namespace {

MacQueue filled(std::size_t n, std::uint32_t bytes = 1470)
{
  MacQueue q;
  for (std::size_t i = 0; i < n; ++i) {
    q.push({bytes, 0.0});
  }
  return q;
}

} // namespace

TEST(Queue, BoundedFifo)
{
  MacQueue q(3);
  EXPECT_TRUE(q.push({1, 0}));
  EXPECT_TRUE(q.push({2, 0}));
  EXPECT_TRUE(q.push({3, 0}));
  EXPECT_FALSE(q.push({4, 0}));
  EXPECT_EQ(q.drops(), 1u);
  EXPECT_EQ(q.take(1).bytes, 2u);
  EXPECT_EQ(q.pop_front().bytes, 1u);
  EXPECT_EQ(q.front().bytes, 3u);
  EXPECT_EQ(MacQueue{}.capacity(), 1000u);
}

TEST(VirtualCollision, HighestPriorityWins)
{
  const std::array<Ac, 1> vo{Ac::VO};
  auto r = resolve_virtual_collision(vo);
  EXPECT_EQ(r.winner, Ac::VO);
  EXPECT_TRUE(r.losers.empty());

  const std::array<Ac, 2> vi_be{Ac::BE, Ac::VI};
  r = resolve_virtual_collision(vi_be);
  EXPECT_EQ(r.winner, Ac::VI);
  EXPECT_EQ(r.losers, std::vector<Ac>{Ac::BE});

  const std::array<Ac, 4> all{Ac::BK, Ac::VI, Ac::VO, Ac::BE};
  r = resolve_virtual_collision(all);
  EXPECT_EQ(r.winner, Ac::VO);
  EXPECT_EQ(r.losers.size(), 3u);
  EXPECT_THROW(resolve_virtual_collision({}), std::logic_error);
}

TEST(Transmission, Policies)
{
  EXPECT_EQ(aggregation_policy(Protocol::EcaFairShare, Ac::VO), AggregationPolicy::FairShare);
  EXPECT_EQ(aggregation_policy(Protocol::EcaFairShare, Ac::BE), AggregationPolicy::SingleMsdu);
  EXPECT_EQ(aggregation_policy(Protocol::EcaTxop, Ac::VI), AggregationPolicy::Txop);
  EXPECT_EQ(aggregation_policy(Protocol::Edca, Ac::VO), AggregationPolicy::Txop);
  EXPECT_EQ(aggregation_policy(Protocol::Edca, Ac::BK), AggregationPolicy::SingleMsdu);
}

TEST(Transmission, FairShareTakesTwoToTheK)
{
  const phy::PhyParams phy;
  const auto q = filled(100);
  const auto u = build_transmission(0, Ac::VO, AggregationPolicy::FairShare, 3, mac::presets::eca(Ac::VO), q, phy,
                                    phy::AccessMode::BasicAccess);
  EXPECT_EQ(u.mpdus.size(), 8u);
  EXPECT_EQ(u.kind, UnitKind::Ampdu);
  const auto capped = build_transmission(0, Ac::VO, AggregationPolicy::FairShare, 5, mac::presets::eca(Ac::VO),
                                         filled(100), phy, phy::AccessMode::BasicAccess);
  EXPECT_EQ(capped.mpdus.size(), 32u);
  const auto few = build_transmission(0, Ac::VO, AggregationPolicy::FairShare, 3, mac::presets::eca(Ac::VO),
                                      filled(3), phy, phy::AccessMode::BasicAccess);
  EXPECT_EQ(few.mpdus.size(), 3u);
}

TEST(Transmission, TxopBurstFitsLimit)
{
  const phy::PhyParams phy;
  for (auto mode : {phy::AccessMode::BasicAccess, phy::AccessMode::RtsCts}) {
    for (auto ac : {Ac::VO, Ac::VI}) {
      const auto params = mac::presets::edca(ac);
      const auto u = build_transmission(0, ac, AggregationPolicy::Txop, 0, params, filled(100), phy, mode);
      EXPECT_GE(u.mpdus.size(), 1u);
      EXPECT_LE(u.mpdus.size(), kMaxAmpduMpdus);
      EXPECT_LE(phy::exchange_time_us(u.airtime_us, u.mpdus.size(), mode, phy), params.txop_limit_us);
      // One more MPDU would not fit.
      std::vector<std::uint32_t> more = u.mpdus;
      more.push_back(1470);
      EXPECT_GT(phy::exchange_time_us(phy::data_airtime_us(more, phy), more.size(), mode, phy), params.txop_limit_us);
    }
  }
}

TEST(Transmission, LowPriorityAlwaysSingle)
{
  const phy::PhyParams phy;
  for (auto protocol : {Protocol::Edca, Protocol::EcaFairShare, Protocol::EcaTxop}) {
    const auto u = build_transmission(0, Ac::BK, aggregation_policy(protocol, Ac::BK), 4, mac::presets::eca(Ac::BK), filled(50), phy,
                                      phy::AccessMode::RtsCts);
    EXPECT_EQ(u.mpdus.size(), 1u);
  }
  EXPECT_THROW(build_transmission(0, Ac::BE, AggregationPolicy::SingleMsdu, 0, mac::presets::eca(Ac::BE), MacQueue{},
                                  phy, phy::AccessMode::BasicAccess),
               std::logic_error);
}

TEST(ProtocolNames, RoundTrip)
{
  for (auto p : {Protocol::Edca, Protocol::EcaFairShare, Protocol::EcaTxop}) {
    EXPECT_EQ(parse_protocol(to_string(p)), p);
  }
  EXPECT_EQ(parse_protocol("eca"), Protocol::EcaFairShare);
  EXPECT_EQ(parse_protocol("eca-txop"), Protocol::EcaTxop);
  EXPECT_FALSE(parse_protocol("dcf"));
}

namespace {

StationSetup single_ac_setup(Protocol protocol, Ac ac)
{
  StationSetup s;
  s.protocol = protocol;
  s.params = is_eca(protocol) ? mac::presets::eca_all() : mac::presets::edca_all();
  s.sources[index(ac)] = traffic::SaturatedSource{};
  s.run_seed = 99;
  return s;
}

} // namespace

TEST(Station, SaturatedStartFillsQueue)
{
  Station st(single_ac_setup(Protocol::EcaFairShare, Ac::BE));
  st.start(0);
  EXPECT_EQ(st.queue(Ac::BE).size(), 1000u);
  EXPECT_TRUE(st.state(Ac::BE).backlogged);
  EXPECT_FALSE(st.state(Ac::VO).backlogged);
  EXPECT_TRUE(st.is_saturated(Ac::BE));
  EXPECT_FALSE(st.has_source(Ac::VI));
}

TEST(Station, AloneItConvergesToPeriodicSchedule)
{
  const phy::PhyParams phy;
  Station st(single_ac_setup(Protocol::EcaFairShare, Ac::BE));
  st.start(0);
  std::vector<std::uint64_t> tx_slots;
  double now = 0;
  for (std::uint64_t slot = 0; slot < 2000; ++slot) {
    const auto* u = st.begin_slot(phy, phy::AccessMode::BasicAccess);
    SlotFeedback fb;
    fb.busy = u != nullptr;
    fb.end_us = now + (u ? 300.0 : phy.empty_slot_us);
    if (u) {
      fb.outcome = OwnOutcome::Success;
      fb.verdict = {1, 1, true};
      tx_slots.push_back(slot);
    }
    st.end_slot(fb);
    now = fb.end_us;
  }
  ASSERT_GT(tx_slots.size(), 10u);
  const int bd = mac::deterministic_backoff(mac::presets::eca(Ac::BE), st.state(Ac::BE).stage);
  for (std::size_t i = 1; i < tx_slots.size(); ++i) {
    EXPECT_EQ(tx_slots[i] - tx_slots[i - 1], static_cast<std::uint64_t>(bd + 1));
  }
  EXPECT_EQ(st.counters(Ac::BE).successes, tx_slots.size());
  EXPECT_EQ(st.queue(Ac::BE).size(), 1000u);
}

TEST(Station, VirtualCollisionLoserBacksOff)
{
  const phy::PhyParams phy;
  StationSetup setup = single_ac_setup(Protocol::Edca, Ac::VI);
  setup.sources[index(Ac::BE)] = traffic::SaturatedSource{};
  setup.eca.smart_backoff = false;
  // Search seeds until both ACs become ready in the same slot.
  for (std::uint64_t seed = 1; seed < 5000; ++seed) {
    setup.run_seed = seed;
    Station st(setup);
    st.start(0);
    for (int slot = 0; slot < 64; ++slot) {
      const auto vi = st.state(Ac::VI);
      const auto be = st.state(Ac::BE);
      const bool both = vi.backoff == 0 && vi.aifs_freeze == 0 && be.backoff == 0 && be.aifs_freeze == 0;
      const auto* u = st.begin_slot(phy, phy::AccessMode::BasicAccess);
      SlotFeedback fb;
      fb.busy = u != nullptr;
      fb.end_us = 1000.0 * (slot + 1);
      if (u) {
        fb.outcome = OwnOutcome::Success;
        fb.verdict = {1, 1, true};
      }
      if (both) {
        ASSERT_NE(u, nullptr);
        EXPECT_EQ(u->ac, Ac::VI);
        const auto before = st.counters(Ac::BE);
        st.end_slot(fb);
        EXPECT_EQ(st.counters(Ac::BE).virtual_collisions, before.virtual_collisions + 1);
        EXPECT_EQ(st.counters(Ac::BE).attempts, before.attempts);
        EXPECT_EQ(st.state(Ac::BE).cw_curr, std::min(2 * be.cw_curr, 1024));
        return;
      }
      st.end_slot(fb);
    }
  }
  FAIL() << "no virtual collision found";
}
