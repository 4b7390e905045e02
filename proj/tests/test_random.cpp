#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ecasim/random.hpp"

using ecasim::derive_seed;
using ecasim::RandomStream;

TEST(Random, SameSeedSameSequence)
{
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.next_u64(), b.next_u64());
  }
}

TEST(Random, DerivedSeedsDifferPerLabel)
{
  std::set<std::uint64_t> seen;
  for (std::uint64_t station = 0; station < 20; ++station) {
    for (std::uint64_t ac = 0; ac < 4; ++ac) {
      for (std::uint64_t purpose = 1; purpose <= 3; ++purpose) {
        seen.insert(derive_seed(7, {station, ac, purpose}));
      }
    }
  }
  EXPECT_EQ(seen.size(), 20u * 4u * 3u);
  EXPECT_NE(derive_seed(1, {0, 1}), derive_seed(1, {1, 0}));
}

TEST(Random, UniformIntStaysInRange)
{
  RandomStream rng(3);
  for (int i = 0; i < 10000; ++i) {
    const auto v = rng.uniform_int(-3, 5);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 5);
  }
  EXPECT_EQ(rng.uniform_int(4, 4), 4);
}

TEST(Random, ExponentialMean)
{
  RandomStream rng(5);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    sum += rng.exponential(2.5);
  }
  // Standard error is 2.5 / sqrt(n), about 0.0056.
  EXPECT_NEAR(sum / n, 2.5, 0.03);
}

TEST(Random, NormalMoments)
{
  RandomStream rng(9);
  double sum = 0;
  double sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(10.0, 3.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 10.0, 0.03);
  EXPECT_NEAR(std::sqrt(sq / n - mean * mean), 3.0, 0.03);
}
