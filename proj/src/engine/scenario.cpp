#include "ecasim/engine/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ecasim::engine {

std::string_view to_string(SourceKind k) noexcept
{
  switch (k) {
  case SourceKind::None: return "none";
  case SourceKind::Saturated: return "saturated";
  case SourceKind::Voice: return "voice";
  case SourceKind::Video: return "video";
  }
  return "?";
}

std::string_view to_string(TrafficProfile t) noexcept
{
  return t == TrafficProfile::Saturated ? "saturated" : "nonsaturated";
}

std::array<SourceKind, kNumAcs> profile_sources(TrafficProfile profile) noexcept
{
  if (profile == TrafficProfile::Saturated) {
    return {SourceKind::Saturated, SourceKind::Saturated, SourceKind::Saturated, SourceKind::Saturated};
  }
  return {SourceKind::Voice, SourceKind::Video, SourceKind::Saturated, SourceKind::Saturated};
}

namespace {

void require(bool ok, const std::string& what)
{
  if (!ok) {
    throw std::invalid_argument(what);
  }
}

void validate_params(const mac::AcParams& p, const std::string& label)
{
  require(p.cw_min >= 1, label + ": cw_min must be >= 1");
  require(p.cw_max >= p.cw_min, label + ": cw_max must be >= cw_min");
  require(p.max_stage >= 0 && p.max_stage <= 10, label + ": max_stage must be in [0, 10]");
  require((static_cast<long long>(p.cw_min) << p.max_stage) <= 4096, label + ": 2^m * cw_min must not exceed 4096");
  require(p.aifsn >= 1, label + ": aifsn must be >= 1");
  require(p.txop_limit_us >= 0, label + ": txop_limit must be >= 0");
}

} // namespace

void Scenario::validate() const
{
  require(!stations.empty(), "scenario needs at least one station");
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const auto p = stations[i].protocol;
    require(p == station::Protocol::Edca || p == station::Protocol::EcaFairShare || p == station::Protocol::EcaTxop,
            "station " + std::to_string(i) + ": unknown protocol");
    for (auto k : stations[i].sources) {
      require(k == SourceKind::None || k == SourceKind::Saturated || k == SourceKind::Voice || k == SourceKind::Video,
              "station " + std::to_string(i) + ": unknown source kind");
    }
  }
  require(p_e >= 0.0 && p_e <= 1.0, "p_e must be in [0, 1]");
  require(std::isfinite(duration_s) && duration_s > 0.0, "duration must be positive");
  require(replications >= 1, "replications must be >= 1");
  require(eca.stickiness >= 0 && eca.stickiness_max >= eca.stickiness,
          "stickiness must satisfy 0 <= stickiness <= stickiness_max");
  phy.validate();
  for (auto ac : kAllAcs) {
    validate_params(edca_params[index(ac)], "edca." + std::string(to_string(ac)));
    validate_params(eca_params[index(ac)], "eca." + std::string(to_string(ac)));
  }
  voice.validate();
  video.validate();
  require(saturated.payload_bytes >= 1, "saturated payload must be >= 1 byte");
}

Scenario Scenario::uniform(int n, station::Protocol protocol, TrafficProfile profile)
{
  Scenario s;
  s.traffic = profile;
  s.stations.assign(static_cast<std::size_t>(std::max(0, n)), StationSpec{protocol, profile_sources(profile)});
  return s;
}

Scenario Scenario::mixed(int n, station::Protocol first, station::Protocol second, TrafficProfile profile)
{
  Scenario s = uniform(n, first, profile);
  for (std::size_t i = 1; i < s.stations.size(); i += 2) {
    s.stations[i].protocol = second;
  }
  return s;
}

Scenario Scenario::with_station_count(int n) const
{
  if (stations.empty() || n < 1) {
    throw std::invalid_argument("with_station_count needs a non-empty pattern and n >= 1");
  }
  Scenario out = *this;
  out.stations.clear();
  for (int i = 0; i < n; ++i) {
    out.stations.push_back(stations[static_cast<std::size_t>(i) % stations.size()]);
  }
  return out;
}

namespace {

class Fnv1a
{
public:
  void add(std::string_view text)
  {
    for (unsigned char c : text) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
    h_ ^= 0xff;
    h_ *= 0x100000001b3ULL;
  }
  void add(double v)
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    add(std::string_view(buf));
  }
  void add(long long v) { add(std::to_string(v)); }
  std::uint64_t value() const { return h_; }

private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

void add_params(Fnv1a& f, const mac::AcParams& p)
{
  f.add(static_cast<long long>(p.cw_min));
  f.add(static_cast<long long>(p.cw_max));
  f.add(static_cast<long long>(p.max_stage));
  f.add(static_cast<long long>(p.aifsn));
  f.add(p.txop_limit_us);
}

} // namespace

std::uint64_t fingerprint(const Scenario& s)
{
  Fnv1a f;
  f.add(std::string_view("ecasim-scenario-v1"));
  f.add(static_cast<long long>(s.stations.size()));
  for (const auto& st : s.stations) {
    f.add(station::to_string(st.protocol));
    for (auto k : st.sources) {
      f.add(to_string(k));
    }
  }
  f.add(to_string(s.traffic));
  const auto& p = s.phy;
  for (double v : {p.data_rate_bps, p.channel_width_mhz, p.empty_slot_us, p.difs_us, p.sifs_us, p.symbol_us,
                   p.control_rate_bps, p.preamble_us}) {
    f.add(v);
  }
  for (long long v : {static_cast<long long>(p.spatial_streams), static_cast<long long>(p.rts_bytes),
                      static_cast<long long>(p.cts_bytes), static_cast<long long>(p.ack_bytes),
                      static_cast<long long>(p.block_ack_bytes), static_cast<long long>(p.mac_header_bytes)}) {
    f.add(v);
  }
  f.add(s.access == phy::AccessMode::RtsCts ? std::string_view("rts_cts") : std::string_view("basic"));
  f.add(s.p_e);
  f.add(s.duration_s);
  f.add(static_cast<long long>(s.eca.hysteresis));
  f.add(static_cast<long long>(s.eca.smart_backoff));
  f.add(static_cast<long long>(s.eca.sr_trigger));
  f.add(static_cast<long long>(s.eca.sr_reduction));
  f.add(static_cast<long long>(s.eca.stickiness));
  f.add(static_cast<long long>(s.eca.stickiness_max));
  for (auto ac : kAllAcs) {
    add_params(f, s.edca_params[index(ac)]);
    add_params(f, s.eca_params[index(ac)]);
  }
  f.add(s.voice.on_mean_s);
  f.add(s.voice.off_mean_s);
  f.add(s.voice.rate_bps);
  f.add(static_cast<long long>(s.voice.payload_bytes));
  for (auto t : s.video.gop) {
    f.add(static_cast<long long>(t));
  }
  f.add(s.video.mean_i);
  f.add(s.video.mean_p);
  f.add(s.video.mean_b);
  f.add(s.video.stddev_factor);
  f.add(s.video.rate_bps);
  f.add(static_cast<long long>(s.saturated.payload_bytes));
  f.add(static_cast<long long>(s.saturated.fill_packets));
  return f.value();
}

} // namespace ecasim::engine
