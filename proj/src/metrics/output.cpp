#include "ecasim/metrics/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace ecasim::metrics {

namespace {

constexpr const char* kColumns[] = {"scenario", "fingerprint", "seed", "replications", "n", "group",
                                    "ac",       "metric",      "mean", "stddev",       "count"};
constexpr std::size_t kColumnCount = std::size(kColumns);

std::string real(double v)
{
  if (!std::isfinite(v)) {
    return {};
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v)
{
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string quote(std::string_view field)
{
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

double parse_real(const std::string& s)
{
  if (s.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) {
    throw std::runtime_error("malformed number '" + s + "'");
  }
  return v;
}

template <typename T>
T parse_integer(const std::string& s, int base = 10)
{
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("malformed integer '" + s + "'");
  }
  return v;
}

} // namespace

std::optional<Format> parse_format(std::string_view name) noexcept
{
  if (name == "csv") {
    return Format::Csv;
  }
  if (name == "json") {
    return Format::Json;
  }
  return std::nullopt;
}

std::vector<OutputRow> flatten(std::span<const SummaryPoint> points)
{
  std::vector<OutputRow> rows;
  for (const auto& p : points) {
    for (const auto& r : p.rows) {
      rows.push_back({p.label, p.fingerprint, p.seed, p.replications, p.n, r.group, r.ac, r.metric, r.mean, r.stddev,
                      r.count});
    }
  }
  return rows;
}

std::string to_csv(std::span<const SummaryPoint> points)
{
  std::string out;
  for (std::size_t i = 0; i < kColumnCount; ++i) {
    out += i ? "," : "";
    out += kColumns[i];
  }
  out += "\r\n";
  for (const auto& r : flatten(points)) {
    out += quote(r.scenario) + ',' + hex64(r.fingerprint) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.replications) + ',' + std::to_string(r.n) + ',' + quote(r.group) + ',' + quote(r.ac) +
           ',' + quote(r.metric) + ',' + real(r.mean) + ',' + real(r.stddev) + ',' + std::to_string(r.count) + "\r\n";
  }
  return out;
}

std::string to_json(std::span<const SummaryPoint> points)
{
  auto arr = nlohmann::ordered_json::array();
  const auto number = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); };
  for (const auto& r : flatten(points)) {
    nlohmann::ordered_json o;
    o["scenario"] = r.scenario;
    o["fingerprint"] = hex64(r.fingerprint);
    o["seed"] = r.seed;
    o["replications"] = r.replications;
    o["n"] = r.n;
    o["group"] = r.group;
    o["ac"] = r.ac;
    o["metric"] = r.metric;
    o["mean"] = number(r.mean);
    o["stddev"] = number(r.stddev);
    o["count"] = r.count;
    arr.push_back(std::move(o));
  }
  return arr.dump(1) + "\n";
}

std::string render(std::span<const SummaryPoint> points, Format format)
{
  return format == Format::Csv ? to_csv(points) : to_json(points);
}

std::vector<std::vector<std::string>> split_csv(std::string_view text)
{
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
        ++i;
      }
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      field.clear();
      record.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) {
    throw std::runtime_error("unterminated quoted CSV field");
  }
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<OutputRow> parse_csv(std::string_view text)
{
  const auto records = split_csv(text);
  if (records.empty()) {
    throw std::runtime_error("CSV has no header");
  }
  const auto& header = records.front();
  if (header.size() != kColumnCount) {
    throw std::runtime_error("unexpected CSV header");
  }
  for (std::size_t i = 0; i < kColumnCount; ++i) {
    if (header[i] != kColumns[i]) {
      throw std::runtime_error("unexpected CSV column '" + header[i] + "'");
    }
  }
  std::vector<OutputRow> rows;
  for (std::size_t line = 1; line < records.size(); ++line) {
    const auto& f = records[line];
    if (f.size() != kColumnCount) {
      throw std::runtime_error("CSV record " + std::to_string(line + 1) + " has " + std::to_string(f.size()) +
                               " fields");
    }
    rows.push_back({f[0], parse_integer<std::uint64_t>(f[1], 16), parse_integer<std::uint64_t>(f[2]),
                    parse_integer<int>(f[3]), parse_integer<int>(f[4]), f[5], f[6], f[7], parse_real(f[8]),
                    parse_real(f[9]), parse_integer<int>(f[10])});
  }
  return rows;
}

std::vector<OutputRow> parse_json(std::string_view text)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw std::runtime_error("JSON output must be a top-level array");
  }
  const auto number = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  std::vector<OutputRow> rows;
  try {
    for (const auto& o : doc) {
      rows.push_back({o.at("scenario").get<std::string>(),
                      parse_integer<std::uint64_t>(o.at("fingerprint").get<std::string>(), 16),
                      o.at("seed").get<std::uint64_t>(), o.at("replications").get<int>(), o.at("n").get<int>(),
                      o.at("group").get<std::string>(), o.at("ac").get<std::string>(),
                      o.at("metric").get<std::string>(), number(o.at("mean")), number(o.at("stddev")),
                      o.at("count").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed JSON row: ") + e.what());
  }
  return rows;
}

void emit_results(std::span<const SummaryPoint> points, Format format, const std::filesystem::path& path)
{
  if (points.empty()) {
    throw std::invalid_argument("nothing to emit");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << render(points, format);
  out.flush();
  if (!out) {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

} // namespace ecasim::metrics
