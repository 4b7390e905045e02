#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ecasim/config/config.hpp"
#include "ecasim/metrics/metrics.hpp"
#include "ecasim/metrics/output.hpp"

namespace {

using namespace ecasim;

struct Common
{
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<double> duration;
  std::string format = "csv";
  std::string output = "-";
  int jobs = 1;
};

struct Range
{
  int min = 0;
  int max = 0;
  int step = 1;
};

void add_common(CLI::App* cmd, Common& c)
{
  cmd->add_option("--seed", c.seed, "Scenario seed");
  cmd->add_option("--replications,-r", c.replications, "Replications per point")->check(CLI::PositiveNumber);
  cmd->add_option("--duration,-d", c.duration, "Virtual time per replication (s)")->check(CLI::PositiveNumber);
  cmd->add_option("--format,-f", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output,-o", c.output, "Output file, - for stdout");
  cmd->add_option("--jobs,-j", c.jobs, "Worker threads for replications")->check(CLI::PositiveNumber);
}

void add_range(CLI::App* cmd, Range& r, bool required)
{
  auto* lo = cmd->add_option("--n-min", r.min, "Smallest station count")->check(CLI::PositiveNumber);
  auto* hi = cmd->add_option("--n-max", r.max, "Largest station count")->check(CLI::PositiveNumber);
  cmd->add_option("--n-step", r.step, "Station count increment")->check(CLI::PositiveNumber);
  if (required) {
    lo->required();
    hi->required();
  } else {
    lo->needs(hi);
    hi->needs(lo);
  }
}

engine::Scenario load(const std::string& path, const Common& c)
{
  auto s = config::load_scenario(path);
  if (c.seed) {
    s.seed = *c.seed;
  }
  if (c.replications) {
    s.replications = *c.replications;
  }
  if (c.duration) {
    s.duration_s = *c.duration;
  }
  s.validate();
  return s;
}

std::string stem(const std::string& path)
{
  const auto slash = path.find_last_of('/');
  auto name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

std::vector<int> counts(const engine::Scenario& s, const Range& r)
{
  if (r.min == 0) {
    return {static_cast<int>(s.stations.size())};
  }
  if (r.max < r.min) {
    throw std::invalid_argument("--n-max must not be below --n-min");
  }
  std::vector<int> out;
  for (int n = r.min; n <= r.max; n += r.step) {
    out.push_back(n);
  }
  return out;
}

metrics::SummaryPoint point(const engine::Scenario& s, int n, const std::string& label, int jobs)
{
  const auto sized = s.with_station_count(n);
  const auto results = metrics::run_replications(sized, jobs);
  return metrics::summarize(results, sized.seed, label);
}

void write(const std::vector<metrics::SummaryPoint>& points, const Common& c)
{
  const auto format = *metrics::parse_format(c.format);
  if (c.output == "-") {
    std::cout << metrics::render(points, format);
    std::cout.flush();
    if (!std::cout) {
      throw std::runtime_error("failed writing to stdout");
    }
  } else {
    metrics::emit_results(points, format, c.output);
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Slotted 802.11 MAC contention simulator: EDCA and CSMA/ECA_QoS"};
  app.require_subcommand(1);

  Common run_opts;
  std::string run_file;
  std::optional<int> run_n;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", run_file, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--n", run_n, "Override the station count")->check(CLI::PositiveNumber);
  add_common(run, run_opts);

  Common sweep_opts;
  std::string sweep_file;
  Range sweep_range;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a range of station counts");
  sweep->add_option("scenario", sweep_file, "Scenario file")->required()->check(CLI::ExistingFile);
  add_range(sweep, sweep_range, true);
  add_common(sweep, sweep_opts);

  Common cmp_opts;
  std::vector<std::string> cmp_files;
  Range cmp_range;
  auto* compare = app.add_subcommand("compare", "Run two scenarios side by side");
  compare->add_option("scenarios", cmp_files, "Two scenario files")->required()->expected(2)->check(CLI::ExistingFile);
  add_range(compare, cmp_range, false);
  add_common(compare, cmp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the exit status of scenario errors.
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    std::vector<metrics::SummaryPoint> points;
    const Common* opts = nullptr;
    if (*run) {
      opts = &run_opts;
      const auto s = load(run_file, run_opts);
      points.push_back(point(s, run_n.value_or(static_cast<int>(s.stations.size())), stem(run_file), run_opts.jobs));
    } else if (*sweep) {
      opts = &sweep_opts;
      const auto s = load(sweep_file, sweep_opts);
      for (int n : counts(s, sweep_range)) {
        points.push_back(point(s, n, stem(sweep_file), sweep_opts.jobs));
      }
    } else {
      opts = &cmp_opts;
      const auto a = load(cmp_files[0], cmp_opts);
      const auto b = load(cmp_files[1], cmp_opts);
      auto label_a = stem(cmp_files[0]);
      auto label_b = stem(cmp_files[1]);
      if (label_a == label_b) {
        label_a += "#1";
        label_b += "#2";
      }
      for (int n : counts(a, cmp_range)) {
        points.push_back(point(a, n, label_a, cmp_opts.jobs));
        points.push_back(point(b, cmp_range.min == 0 ? static_cast<int>(b.stations.size()) : n, label_b, cmp_opts.jobs));
      }
    }
    write(points, *opts);
  } catch (const config::ParseError& e) {
    std::cerr << "ecasim: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ecasim: invalid scenario: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ecasim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
