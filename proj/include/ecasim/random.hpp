#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ecasim {

/// SplitMix64 finalizer. Used to derive independent sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a sequence of labels into one seed, e.g. (run seed, station, ac, purpose).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> labels) noexcept
{
  std::uint64_t s = mix64(base);
  for (auto l : labels) {
    s = mix64(s ^ mix64(l + 0x632be59bd9b4e019ULL));
  }
  return s;
}

/// A seedable random stream with distribution mappings implemented locally,
/// so draws are identical across standard library implementations.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [lo, hi] (inclusive), unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
  {
    const auto span = static_cast<std::uint64_t>(hi - lo);
    if (span == 0) {
      return lo;
    }
    if (span == ~std::uint64_t{0}) {
      return lo + static_cast<std::int64_t>(next_u64());
    }
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % range);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  double exponential(double mean);

  double normal(double mean, double stddev);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

} // namespace ecasim
