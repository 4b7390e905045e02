#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <vector>

#include "ecasim/mac/backoff.hpp"
#include "ecasim/mac/smart_backoff.hpp"

using namespace ecasim;
using namespace ecasim::mac;

namespace {

// Independent restatement of the draw constraints.
bool oracle_ok(int b, int own_bd, const std::vector<SiblingCounter>& sibs)
{
  for (const auto& s : sibs) {
    if (b == s.backoff) {
      return false;
    }
    const int mod = std::min(own_bd, s.deterministic_backoff);
    if (mod > 0 && std::abs(b - s.backoff) % mod == 0) {
      return false;
    }
  }
  return true;
}

std::vector<SiblingCounter> random_siblings(RandomStream& rng)
{
  const int count = static_cast<int>(rng.uniform_int(0, 3));
  std::vector<SiblingCounter> sibs;
  for (int j = 0; j < count; ++j) {
    const int cw_min = 8 << rng.uniform_int(0, 2);
    const int stage = static_cast<int>(rng.uniform_int(0, 5));
    const int cw = cw_min << stage;
    sibs.push_back({static_cast<int>(rng.uniform_int(0, cw - 1)), cw / 2 - 1});
  }
  return sibs;
}

} // namespace

TEST(SmartBackoff, NoSiblingsMeansUniform)
{
  RandomStream rng(1);
  std::map<int, int> hist;
  for (int i = 0; i < 8000; ++i) {
    const int b = smart_backoff(8, 3, {}, rng);
    ASSERT_GE(b, 0);
    ASSERT_LE(b, 7);
    ++hist[b];
  }
  EXPECT_EQ(hist.size(), 8u);
  for (const auto& [v, c] : hist) {
    EXPECT_NEAR(c, 1000, 150) << v;
  }
}

TEST(SmartBackoff, SingleSiblingExample)
{
  const std::vector<SiblingCounter> sibs{{5, 3}};
  std::vector<int> valid;
  for (int b = 0; b < 8; ++b) {
    if (oracle_ok(b, 3, sibs)) {
      valid.push_back(b);
    }
  }
  EXPECT_EQ(valid, (std::vector<int>{0, 1, 3, 4, 6, 7}));
  RandomStream rng(2);
  std::map<int, int> hist;
  for (int i = 0; i < 6000; ++i) {
    const int b = smart_backoff(8, 3, sibs, rng);
    ASSERT_TRUE(oracle_ok(b, 3, sibs)) << b;
    ++hist[b];
  }
  // 1 shares the sibling's 4-slot cycle phase, so values that keep the
  // cycles apart are preferred.
  std::vector<int> drawn;
  for (const auto& [v, c] : hist) {
    drawn.push_back(v);
  }
  EXPECT_EQ(drawn, (std::vector<int>{0, 3, 4, 6, 7}));
}

TEST(SmartBackoff, PredicateMatchesOracle)
{
  RandomStream rng(3);
  for (int trial = 0; trial < 20000; ++trial) {
    const auto sibs = random_siblings(rng);
    const int own_bd = (8 << rng.uniform_int(0, 4)) / 2 - 1;
    const int b = static_cast<int>(rng.uniform_int(0, 511));
    ASSERT_EQ(satisfies_smart_constraints(b, own_bd, sibs), oracle_ok(b, own_bd, sibs));
  }
}

TEST(SmartBackoff, ResultSatisfiesConstraintsWheneverPossible)
{
  RandomStream rng(4);
  RandomStream gen(5);
  for (int trial = 0; trial < 50000; ++trial) {
    const auto sibs = random_siblings(gen);
    const int cw = 8 << gen.uniform_int(0, 5);
    const int own_bd = cw / 2 - 1;
    bool satisfiable = false;
    for (int b = 0; b < cw && !satisfiable; ++b) {
      satisfiable = oracle_ok(b, own_bd, sibs);
    }
    const int got = smart_backoff(cw, own_bd, sibs, rng);
    ASSERT_GE(got, 0);
    ASSERT_LT(got, cw);
    if (satisfiable) {
      ASSERT_TRUE(oracle_ok(got, own_bd, sibs)) << "trial " << trial;
    }
  }
}

TEST(SmartBackoff, PrefersCycleCompatibleValues)
{
  // B_d = 7 (period 8) against a sibling at 0 with B_d = 7: the modulus rule
  // already forbids every multiple of 7, the cycle rule every multiple of 8.
  const std::vector<SiblingCounter> sibs{{0, 7}};
  RandomStream rng(6);
  SmartBackoffStats stats;
  for (int i = 0; i < 2000; ++i) {
    const int b = smart_backoff(16, 7, sibs, rng, &stats);
    ASSERT_TRUE(oracle_ok(b, 7, sibs));
    ASSERT_TRUE(cycle_compatible(b, 7, sibs));
  }
  EXPECT_EQ(stats.draws, 2000u);
  EXPECT_EQ(stats.cycle_constraint_relaxed, 0u);
  EXPECT_EQ(stats.uniform_fallbacks, 0u);
}

TEST(SmartBackoff, FallsBackWhenNothingFits)
{
  // Window of one slot already taken by a sibling.
  const std::vector<SiblingCounter> sibs{{0, 0}};
  RandomStream rng(7);
  SmartBackoffStats stats;
  EXPECT_EQ(smart_backoff(1, 0, sibs, rng, &stats), 0);
  EXPECT_EQ(stats.uniform_fallbacks, 1u);
}

TEST(SmartBackoff, SiblingCountersSkipIdleAcs)
{
  std::array<AcState, kNumAcs> states{};
  const auto params = presets::eca_all();
  states[index(Ac::VI)].backlogged = true;
  states[index(Ac::VI)].backoff = 4;
  states[index(Ac::VI)].stage = 1;
  states[index(Ac::BE)].backoff = 9; // not backlogged
  const auto sibs = sibling_counters(Ac::VO, states, params);
  ASSERT_EQ(sibs.size(), 1u);
  EXPECT_EQ(sibs[0].backoff, 4);
  EXPECT_EQ(sibs[0].deterministic_backoff, 15);
}
