#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecasim/engine/simulation.hpp"

namespace ecasim::metrics {

/// Jain's index (sum x)^2 / (n * sum x^2). Empty when every value is zero.
/// Throws std::invalid_argument for an empty or negative input.
std::optional<double> jfi(std::span<const double> values);

/// One metric of one replication. `group` is "all" or a protocol name,
/// `ac` is an AC name or "all".
struct Sample
{
  std::string group;
  std::string ac;
  std::string metric;
  double value = 0; // NaN when undefined (e.g. a ratio over zero attempts)
};

/// Flat metric table of one replication, in a fixed order.
std::vector<Sample> run_metrics(const engine::RunResult& result);

struct SummaryRow
{
  std::string group;
  std::string ac;
  std::string metric;
  double mean = 0;   // NaN when no replication defined the metric
  double stddev = 0; // sample standard deviation, 0 for a single value
  int count = 0;     // replications contributing a finite value
};

struct SummaryPoint
{
  std::string label; // scenario name, used by paired output
  int n = 0;
  std::uint64_t fingerprint = 0;
  std::uint64_t seed = 0;
  int replications = 0;
  std::vector<SummaryRow> rows;

  /// Null when absent.
  const SummaryRow* find(std::string_view group, std::string_view ac, std::string_view metric) const;
  /// Mean of the matching row, NaN when absent.
  double mean(std::string_view group, std::string_view ac, std::string_view metric) const;
};

/// Mean and sample standard deviation of every metric over the replications.
/// Throws std::invalid_argument for an empty input or results of different
/// scenarios.
SummaryPoint summarize(std::span<const engine::RunResult> results, std::uint64_t seed, std::string label = {});

/// Runs every replication of `scenario`, on up to `jobs` threads.
std::vector<engine::RunResult> run_replications(const engine::Scenario& scenario, int jobs = 1);

} // namespace ecasim::metrics
