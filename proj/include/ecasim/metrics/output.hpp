#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecasim/metrics/metrics.hpp"

namespace ecasim::metrics {

enum class Format : std::uint8_t { Csv, Json };

std::optional<Format> parse_format(std::string_view name) noexcept;

/// One emitted row: a summary row with the identity of its point.
struct OutputRow
{
  std::string scenario;
  std::uint64_t fingerprint = 0;
  std::uint64_t seed = 0;
  int replications = 0;
  int n = 0;
  std::string group;
  std::string ac;
  std::string metric;
  double mean = 0;
  double stddev = 0;
  int count = 0;
};

std::vector<OutputRow> flatten(std::span<const SummaryPoint> points);

/// Header line plus one line per row. Reals use %.17g, undefined values are
/// empty fields.
std::string to_csv(std::span<const SummaryPoint> points);
/// One top-level array of row objects. Undefined values are null.
std::string to_json(std::span<const SummaryPoint> points);
std::string render(std::span<const SummaryPoint> points, Format format);

/// Inverse of to_csv / to_json. Throws std::runtime_error on malformed input.
std::vector<OutputRow> parse_csv(std::string_view text);
std::vector<OutputRow> parse_json(std::string_view text);

/// Writes the rendered points to `path`. Throws std::runtime_error when the
/// destination cannot be written.
void emit_results(std::span<const SummaryPoint> points, Format format, const std::filesystem::path& path);

/// Splits CSV text into records, honouring quoted fields.
std::vector<std::vector<std::string>> split_csv(std::string_view text);

} // namespace ecasim::metrics
