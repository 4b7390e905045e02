#include <gtest/gtest.h>

#include <cmath>

#include "ecasim/engine/simulation.hpp"

using namespace ecasim;
using namespace ecasim::engine;

namespace {

Scenario single_ac(int n, station::Protocol protocol, Ac ac, double duration_s)
{
  auto s = Scenario::uniform(n, protocol);
  for (auto& st : s.stations) {
    st.sources = {SourceKind::None, SourceKind::None, SourceKind::None, SourceKind::None};
    st.sources[index(ac)] = SourceKind::Saturated;
  }
  s.duration_s = duration_s;
  return s;
}

bool ready(const mac::AcState& s) { return s.backlogged && s.backoff == 0 && s.aifs_freeze == 0; }

} // namespace

TEST(ClassifySlot, Examples)
{
  const phy::DeliveryVerdict ok{1, 1, true};
  const phy::DeliveryVerdict lost{0, 0, false};
  EXPECT_EQ(classify_slot({}, ok).kind, SlotKind::Empty);

  const std::vector<Participant> one{{1, Ac::VO}};
  const auto s = classify_slot(one, ok);
  EXPECT_EQ(s.kind, SlotKind::Success);
  ASSERT_TRUE(s.winner.has_value());
  EXPECT_EQ(*s.winner, (Participant{1, Ac::VO}));
  EXPECT_EQ(classify_slot(one, lost).kind, SlotKind::Error);

  const std::vector<Participant> two{{1, Ac::VO}, {2, Ac::VI}};
  const auto c = classify_slot(two, ok);
  EXPECT_EQ(c.kind, SlotKind::Collision);
  EXPECT_EQ(c.participants, two);
  EXPECT_FALSE(c.winner.has_value());
}

TEST(Simulation, EmptySlotDecrementsEveryBackloggedCounter)
{
  auto s = Scenario::uniform(3, station::Protocol::EcaFairShare);
  Simulation sim(s, 0);
  // Walk until a slot in which nobody is ready.
  for (int guard = 0; guard < 1000; ++guard) {
    bool any_ready = false;
    std::vector<mac::AcState> before;
    for (const auto& st : sim.stations()) {
      for (auto ac : kAllAcs) {
        before.push_back(st.state(ac));
        any_ready = any_ready || ready(st.state(ac));
      }
    }
    const auto out = sim.advance_slot();
    if (any_ready) {
      continue;
    }
    EXPECT_EQ(out.kind, SlotKind::Empty);
    std::size_t i = 0;
    for (const auto& st : sim.stations()) {
      for (auto ac : kAllAcs) {
        const auto& b = before[i++];
        const auto& a = st.state(ac);
        if (b.aifs_freeze > 0) {
          EXPECT_EQ(a.aifs_freeze, b.aifs_freeze - 1);
        } else {
          EXPECT_EQ(a.backoff, b.backoff - 1);
        }
      }
    }
    return;
  }
  FAIL() << "no empty slot reached";
}

TEST(Simulation, SlotKindMatchesReadyAttempts)
{
  auto s = single_ac(4, station::Protocol::Edca, Ac::BE, 1.0);
  Simulation sim(s, 0);
  int successes = 0;
  int collisions = 0;
  for (int slot = 0; slot < 20000; ++slot) {
    std::vector<Participant> expected;
    for (const auto& st : sim.stations()) {
      if (ready(st.state(Ac::BE))) {
        expected.push_back({st.id(), Ac::BE});
      }
    }
    const auto out = sim.advance_slot();
    ASSERT_EQ(out.participants, expected);
    if (expected.size() == 1) {
      ASSERT_EQ(out.kind, SlotKind::Success);
      ASSERT_EQ(*out.winner, expected.front());
      ++successes;
    } else if (expected.size() >= 2) {
      ASSERT_EQ(out.kind, SlotKind::Collision);
      ++collisions;
    } else {
      ASSERT_EQ(out.kind, SlotKind::Empty);
    }
  }
  EXPECT_GT(successes, 0);
  EXPECT_GT(collisions, 0);
}

TEST(Simulation, CensusAndClockConservation)
{
  auto s = Scenario::uniform(6, station::Protocol::EcaFairShare, TrafficProfile::NonSaturated);
  s.p_e = 0.1;
  s.duration_s = 3.0;
  Simulation sim(s, 0);
  double total = 0;
  std::uint64_t observed = 0;
  sim.set_observer([&](const SlotOutcome&, double start, double dur) {
    EXPECT_NEAR(start, total, 1e-6 * std::max(1.0, total));
    total += dur;
    ++observed;
  });
  sim.run();
  const auto r = sim.result();
  EXPECT_EQ(r.census.total(), r.clock.slot_index);
  EXPECT_EQ(observed, r.clock.slot_index);
  EXPECT_NEAR(total, r.clock.now_us, 1e-6 * total);
  EXPECT_GE(r.clock.now_us, 3e6);
  EXPECT_GT(r.census.error, 0u);
  for (const auto& st : r.stations) {
    for (const auto& c : st.ac) {
      EXPECT_EQ(c.attempts, c.successes + c.failures);
      EXPECT_EQ(c.failures, c.collisions + c.errors);
    }
  }
}

TEST(Simulation, Determinism)
{
  for (auto protocol : {station::Protocol::Edca, station::Protocol::EcaFairShare, station::Protocol::EcaTxop}) {
    auto s = Scenario::uniform(8, protocol, TrafficProfile::NonSaturated);
    s.p_e = 0.1;
    s.duration_s = 2.0;
    s.replications = 2;
    std::vector<SlotKind> first;
    std::vector<SlotKind> second;
    Simulation a(s, 1);
    a.set_observer([&](const SlotOutcome& o, double, double) { first.push_back(o.kind); });
    a.run();
    Simulation b(s, 1);
    b.set_observer([&](const SlotOutcome& o, double, double) { second.push_back(o.kind); });
    b.run();
    EXPECT_EQ(first, second);
    EXPECT_EQ(a.result(), b.result());
    EXPECT_NE(run_simulation(s, 0).census, a.result().census);
  }
}

TEST(Simulation, FastForwardMatchesSlotBySlot)
{
  auto s = Scenario::uniform(5, station::Protocol::EcaFairShare, TrafficProfile::NonSaturated);
  s.p_e = 0.1;
  s.duration_s = 2.0;
  Simulation fast(s, 0);
  fast.run();
  Simulation slow(s, 0);
  while (slow.clock().now_us < s.duration_s * 1e6) {
    slow.advance_slot();
  }
  EXPECT_EQ(fast.result(), slow.result());
}

TEST(Simulation, SingleContenderNeverCollides)
{
  for (auto protocol : {station::Protocol::Edca, station::Protocol::EcaFairShare}) {
    const auto r = run_simulation(single_ac(1, protocol, Ac::BE, 10.0), 0);
    EXPECT_EQ(r.census.collision, 0u);
    EXPECT_GT(r.census.success, 0u);
  }
}

TEST(Simulation, RunSeedsDifferPerReplication)
{
  EXPECT_NE(replication_seed(1, 0), replication_seed(1, 1));
  EXPECT_NE(replication_seed(1, 0), replication_seed(2, 0));
  auto s = Scenario::uniform(2, station::Protocol::Edca);
  EXPECT_THROW(Simulation(s, 1), std::invalid_argument);
  s.stations.clear();
  EXPECT_THROW(Simulation(s, 0), std::invalid_argument);
}

TEST(Absorption, FewSingleAcEcaStationsBecomeCollisionFree)
{
  // N <= ceil(cw_min / 2) contenders fit into the stage-0 cycle.
  for (int n : {4, 8, 16}) {
    auto s = single_ac(n, station::Protocol::EcaFairShare, Ac::BE, 40.0);
    s.eca.hysteresis = false;
    const auto r = run_simulation(s, 0);
    SCOPED_TRACE(n);
    EXPECT_GT(r.last_collision_us, -2.0);
    EXPECT_LT(r.last_collision_us, 30e6);
  }
}

TEST(Stickiness, StickinessOneFailsLessThanZero)
{
  // Stickiness levels compared on plain ECA, without Schedule Reset.
  auto base = Scenario::uniform(20, station::Protocol::EcaFairShare);
  base.eca.sr_reduction = mac::SrReduction::Off;
  base.replications = 6;
  base.duration_s = 20.0;
  auto zero = base;
  zero.eca.stickiness = 0;
  zero.eca.stickiness_max = 0;
  const auto fraction = [](const Scenario& s) {
    std::uint64_t attempts = 0;
    std::uint64_t failures = 0;
    for (int r = 0; r < s.replications; ++r) {
      for (const auto& st : run_simulation(s, r).stations) {
        for (const auto& c : st.ac) {
          attempts += c.attempts;
          failures += c.failures;
        }
      }
    }
    return static_cast<double>(failures) / static_cast<double>(attempts);
  };
  EXPECT_LT(fraction(base), fraction(zero));
}
