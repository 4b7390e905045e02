#include "ecasim/metrics/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ecasim::metrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kStarvationShare = 0.01;

double ratio(double num, double den)
{
  return den > 0 ? num / den : kNaN;
}

struct Tally
{
  station::AcCounters sum{};
  double gap_mean_sum = 0; // sum over station-ACs of their mean gap
  int gap_means = 0;
  int active = 0; // station-ACs with a traffic source
  std::vector<double> per_station_mbps;
};

void add(station::AcCounters& into, const station::AcCounters& c)
{
  into.attempts += c.attempts;
  into.successes += c.successes;
  into.failures += c.failures;
  into.collisions += c.collisions;
  into.errors += c.errors;
  into.virtual_collisions += c.virtual_collisions;
  into.retry_drops += c.retry_drops;
  into.overflow_drops += c.overflow_drops;
  into.delivered_mpdus += c.delivered_mpdus;
  into.delivered_bytes += c.delivered_bytes;
  into.offered_mpdus += c.offered_mpdus;
  into.delay_sum_us += c.delay_sum_us;
  into.delay_count += c.delay_count;
  into.gap_sum_us += c.gap_sum_us;
  into.gap_count += c.gap_count;
  into.sr_reductions += c.sr_reductions;
  into.sr_vetoes += c.sr_vetoes;
}

double mbps(std::uint64_t bytes, double duration_us)
{
  return duration_us > 0 ? static_cast<double>(bytes) * 8.0 / duration_us : 0.0;
}

void group_metrics(std::vector<Sample>& out, const engine::RunResult& r, const std::string& group,
                   std::span<const engine::StationResult* const> stations)
{
  constexpr std::size_t kAll = kNumAcs;
  std::array<Tally, kNumAcs + 1> t{};
  for (const auto* st : stations) {
    station::AcCounters total{};
    bool any_active = false;
    for (auto ac : kAllAcs) {
      const auto i = index(ac);
      const auto& c = st->ac[i];
      add(total, c);
      if (!st->active[i]) {
        continue;
      }
      any_active = true;
      for (auto* tally : {&t[i], &t[kAll]}) {
        add(tally->sum, c);
        ++tally->active;
        if (c.gap_count > 0) {
          tally->gap_mean_sum += c.gap_sum_us / static_cast<double>(c.gap_count);
          ++tally->gap_means;
        }
      }
      t[i].per_station_mbps.push_back(mbps(c.delivered_bytes, r.duration_us));
    }
    if (any_active) {
      t[kAll].per_station_mbps.push_back(mbps(total.delivered_bytes, r.duration_us));
    }
  }

  const double nodes = static_cast<double>(stations.size());
  const double vo_per_node = mbps(t[index(Ac::VO)].sum.delivered_bytes, r.duration_us) / nodes;
  for (std::size_t i = 0; i <= kAll; ++i) {
    const auto& tally = t[i];
    const std::string ac = i == kAll ? "all" : std::string(to_string(kAllAcs[i]));
    const auto emit = [&](const char* metric, double v) { out.push_back({group, ac, metric, v}); };
    const auto& c = tally.sum;
    const bool active = tally.active > 0;
    const double thr = mbps(c.delivered_bytes, r.duration_us);
    emit("throughput_mbps", active ? thr : kNaN);
    emit("throughput_per_node_mbps", active ? thr / nodes : kNaN);
    emit("delivered_mpdus", active ? static_cast<double>(c.delivered_mpdus) : kNaN);
    emit("attempts", active ? static_cast<double>(c.attempts) : kNaN);
    emit("successes", active ? static_cast<double>(c.successes) : kNaN);
    emit("failures", active ? static_cast<double>(c.failures) : kNaN);
    emit("collisions", active ? static_cast<double>(c.collisions) : kNaN);
    emit("errors", active ? static_cast<double>(c.errors) : kNaN);
    emit("virtual_collisions", active ? static_cast<double>(c.virtual_collisions) : kNaN);
    emit("retry_drops", active ? static_cast<double>(c.retry_drops) : kNaN);
    emit("overflow_drops", active ? static_cast<double>(c.overflow_drops) : kNaN);
    emit("failure_fraction", ratio(static_cast<double>(c.failures), static_cast<double>(c.attempts)));
    emit("collision_fraction", ratio(static_cast<double>(c.collisions), static_cast<double>(c.attempts)));
    emit("queueing_delay_ms", ratio(c.delay_sum_us, static_cast<double>(c.delay_count)) / 1e3);
    emit("time_between_successes_ms", ratio(tally.gap_mean_sum, tally.gap_means) / 1e3);
    const auto fairness = tally.per_station_mbps.empty() ? std::nullopt : jfi(tally.per_station_mbps);
    emit("jfi", fairness.value_or(kNaN));
    if (i != kAll) {
      double starved = kNaN;
      if (active) {
        starved = (c.delivered_bytes == 0 || thr / nodes < kStarvationShare * vo_per_node) ? 1.0 : 0.0;
      }
      emit("starved", starved);
    }
  }
}

} // namespace

std::optional<double> jfi(std::span<const double> values)
{
  if (values.empty()) {
    throw std::invalid_argument("jfi needs at least one value");
  }
  double sum = 0;
  double sq = 0;
  for (double x : values) {
    if (!(x >= 0)) {
      throw std::invalid_argument("jfi values must be non-negative");
    }
    sum += x;
    sq += x * x;
  }
  if (sq == 0) {
    return std::nullopt;
  }
  return std::min(1.0, sum * sum / (static_cast<double>(values.size()) * sq));
}

std::vector<Sample> run_metrics(const engine::RunResult& r)
{
  std::vector<Sample> out;
  std::vector<const engine::StationResult*> all;
  std::map<station::Protocol, std::vector<const engine::StationResult*>> by_protocol;
  for (const auto& st : r.stations) {
    all.push_back(&st);
    by_protocol[st.protocol].push_back(&st);
  }
  if (all.empty()) {
    return out;
  }
  group_metrics(out, r, "all", all);
  if (by_protocol.size() > 1) {
    for (const auto& [protocol, members] : by_protocol) {
      group_metrics(out, r, std::string(station::to_string(protocol)), members);
    }
  }

  const auto emit = [&](const char* metric, double v) { out.push_back({"all", "all", metric, v}); };
  const auto& k = r.census;
  const double slots = static_cast<double>(k.total());
  emit("slots", slots);
  emit("slot_empty_fraction", ratio(static_cast<double>(k.empty), slots));
  emit("slot_success_fraction", ratio(static_cast<double>(k.success), slots));
  emit("slot_collision_fraction", ratio(static_cast<double>(k.collision), slots));
  emit("slot_error_fraction", ratio(static_cast<double>(k.error), slots));
  emit("slot_failure_fraction", ratio(static_cast<double>(k.collision + k.error), slots));
  emit("busy_time_fraction", ratio(r.busy_time_us, r.duration_us));
  emit("last_collision_s", r.last_collision_us < 0 ? kNaN : r.last_collision_us / 1e6);
  emit("last_failure_s", r.last_failure_us < 0 ? kNaN : r.last_failure_us / 1e6);
  emit("longest_collision_free_s", r.longest_collision_free_us / 1e6);

  std::uint64_t reductions = 0;
  std::uint64_t vetoes = 0;
  mac::SmartBackoffStats sb{};
  for (const auto& st : r.stations) {
    for (const auto& c : st.ac) {
      reductions += c.sr_reductions;
      vetoes += c.sr_vetoes;
    }
    sb += st.smart_backoff;
  }
  emit("sr_reductions", static_cast<double>(reductions));
  emit("sr_vetoes", static_cast<double>(vetoes));
  emit("smart_backoff_draws", static_cast<double>(sb.draws));
  emit("smart_backoff_cycle_relaxed", static_cast<double>(sb.cycle_constraint_relaxed));
  emit("smart_backoff_modulus_relaxed", static_cast<double>(sb.modulus_constraint_relaxed));
  emit("smart_backoff_uniform", static_cast<double>(sb.uniform_fallbacks));
  return out;
}

const SummaryRow* SummaryPoint::find(std::string_view group, std::string_view ac, std::string_view metric) const
{
  for (const auto& row : rows) {
    if (row.group == group && row.ac == ac && row.metric == metric) {
      return &row;
    }
  }
  return nullptr;
}

double SummaryPoint::mean(std::string_view group, std::string_view ac, std::string_view metric) const
{
  const auto* row = find(group, ac, metric);
  return row ? row->mean : kNaN;
}

SummaryPoint summarize(std::span<const engine::RunResult> results, std::uint64_t seed, std::string label)
{
  if (results.empty()) {
    throw std::invalid_argument("summarize needs at least one result");
  }
  const auto& first = results.front();
  for (const auto& r : results) {
    if (r.fingerprint != first.fingerprint || r.stations.size() != first.stations.size()) {
      throw std::invalid_argument("summarize: results come from different scenarios");
    }
  }

  std::vector<std::vector<Sample>> tables;
  tables.reserve(results.size());
  for (const auto& r : results) {
    tables.push_back(run_metrics(r));
    if (tables.back().size() != tables.front().size()) {
      throw std::invalid_argument("summarize: results come from different scenarios");
    }
  }

  SummaryPoint p;
  p.label = std::move(label);
  p.n = static_cast<int>(first.stations.size());
  p.fingerprint = first.fingerprint;
  p.seed = seed;
  p.replications = static_cast<int>(results.size());
  const auto& layout = tables.front();
  p.rows.reserve(layout.size());
  for (std::size_t m = 0; m < layout.size(); ++m) {
    SummaryRow row{layout[m].group, layout[m].ac, layout[m].metric, kNaN, 0.0, 0};
    double sum = 0;
    for (const auto& t : tables) {
      if (t[m].metric != row.metric || t[m].group != row.group || t[m].ac != row.ac) {
        throw std::invalid_argument("summarize: results come from different scenarios");
      }
      if (std::isfinite(t[m].value)) {
        sum += t[m].value;
        ++row.count;
      }
    }
    if (row.count > 0) {
      row.mean = sum / row.count;
      if (row.count > 1) {
        double ss = 0;
        for (const auto& t : tables) {
          if (std::isfinite(t[m].value)) {
            ss += (t[m].value - row.mean) * (t[m].value - row.mean);
          }
        }
        row.stddev = std::sqrt(ss / (row.count - 1));
      }
    }
    p.rows.push_back(std::move(row));
  }
  return p;
}

std::vector<engine::RunResult> run_replications(const engine::Scenario& scenario, int jobs)
{
  scenario.validate();
  const int reps = scenario.replications;
  std::vector<engine::RunResult> results(static_cast<std::size_t>(reps));
  const int workers = std::clamp(jobs, 1, reps);
  if (workers == 1) {
    for (int r = 0; r < reps; ++r) {
      results[static_cast<std::size_t>(r)] = engine::run_simulation(scenario, r);
    }
    return results;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < reps; r = next++) {
        try {
          results[static_cast<std::size_t>(r)] = engine::run_simulation(scenario, r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return results;
}

} // namespace ecasim::metrics
