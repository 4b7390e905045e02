#include "ecasim/config/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace ecasim::config {

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line), detail_(message)
{
}

ParseError::ParseError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line), detail_(message)
{
}

namespace {

using engine::Scenario;
using engine::SourceKind;

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string_view> split_list(std::string_view s)
{
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) {
      break;
    }
    s.remove_prefix(comma + 1);
  }
  return out;
}

struct Value
{
  std::string_view text;
  int line;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line, what); }

  double real(double lo, double hi) const
  {
    double v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail("expected a number, got '" + std::string(text) + "'");
    }
    if (v < lo || v > hi) {
      std::ostringstream msg;
      msg << "value " << v << " out of range [" << lo << ", " << hi << "]";
      fail(msg.str());
    }
    return v;
  }

  long long integer(long long lo, long long hi) const
  {
    long long v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail("expected an integer, got '" + std::string(text) + "'");
    }
    if (v < lo || v > hi) {
      fail("value " + std::to_string(v) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
  }

  std::uint64_t unsigned64() const
  {
    std::uint64_t v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      fail("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
  }

  bool boolean() const
  {
    const auto t = lower(text);
    if (t == "true" || t == "on" || t == "yes" || t == "1") {
      return true;
    }
    if (t == "false" || t == "off" || t == "no" || t == "0") {
      return false;
    }
    fail("expected a boolean, got '" + std::string(text) + "'");
  }

  template <typename T>
  T choice(std::initializer_list<std::pair<const char*, T>> options) const
  {
    const auto t = lower(text);
    std::string names;
    for (const auto& [name, v] : options) {
      if (t == name) {
        return v;
      }
      names += names.empty() ? "" : ", ";
      names += name;
    }
    fail("unknown value '" + std::string(text) + "' (expected one of: " + names + ")");
  }

  station::Protocol protocol() const
  {
    const auto p = station::parse_protocol(text);
    if (!p) {
      fail("unknown protocol '" + std::string(text) + "'");
    }
    return *p;
  }
};

SourceKind parse_source(const Value& v)
{
  return v.choice<SourceKind>({{"none", SourceKind::None},
                               {"saturated", SourceKind::Saturated},
                               {"voice", SourceKind::Voice},
                               {"video", SourceKind::Video}});
}

using Handler = std::function<void(const Value&)>;
using Section = std::map<std::string, Handler, std::less<>>;

class Parser
{
public:
  Scenario run(std::string_view text);

private:
  void define_sections();
  Section ac_section(std::vector<mac::AcParams*> targets);
  void build_stations();

  Scenario s_;
  std::map<std::string, Section, std::less<>> sections_;
  std::optional<int> n_;
  int n_line_ = 0;
  std::optional<station::Protocol> protocol_;
  std::vector<std::pair<station::Protocol, long long>> mix_;
  std::vector<station::Protocol> explicit_;
  int assignment_line_ = 0;
  int assignments_ = 0;
  std::array<std::optional<SourceKind>, kNumAcs> sources_{};
};

Section Parser::ac_section(std::vector<mac::AcParams*> targets)
{
  const auto each = [targets](auto fn) {
    return [targets, fn](const Value& v) {
      for (auto* p : targets) {
        fn(*p, v);
      }
    };
  };
  return {
      {"cw_min", each([](mac::AcParams& p, const Value& v) { p.cw_min = static_cast<int>(v.integer(1, 4096)); })},
      {"cw_max", each([](mac::AcParams& p, const Value& v) { p.cw_max = static_cast<int>(v.integer(1, 4096)); })},
      {"max_stage", each([](mac::AcParams& p, const Value& v) { p.max_stage = static_cast<int>(v.integer(0, 10)); })},
      {"aifsn", each([](mac::AcParams& p, const Value& v) { p.aifsn = static_cast<int>(v.integer(1, 15)); })},
      {"txop_limit_us", each([](mac::AcParams& p, const Value& v) { p.txop_limit_us = v.real(0, 1e6); })},
  };
}

void Parser::define_sections()
{
  constexpr double kBig = 1e12;
  auto& top = sections_[""];
  top["n"] = [this](const Value& v) {
    n_ = static_cast<int>(v.integer(1, 100000));
    n_line_ = v.line;
  };
  const auto note_assignment = [this](const Value& v) {
    ++assignments_;
    if (assignments_ > 1) {
      v.fail("protocol, protocol_mix and stations are mutually exclusive");
    }
    assignment_line_ = v.line;
  };
  top["protocol"] = [this, note_assignment](const Value& v) {
    note_assignment(v);
    protocol_ = v.protocol();
  };
  top["protocol_mix"] = [this, note_assignment](const Value& v) {
    note_assignment(v);
    for (auto item : split_list(v.text)) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) {
        v.fail("protocol_mix entries look like 'edca:50'");
      }
      const Value name{trim(item.substr(0, colon)), v.line};
      const Value share{trim(item.substr(colon + 1)), v.line};
      mix_.emplace_back(name.protocol(), share.integer(0, 100));
    }
  };
  top["stations"] = [this, note_assignment](const Value& v) {
    note_assignment(v);
    for (auto item : split_list(v.text)) {
      explicit_.push_back(Value{item, v.line}.protocol());
    }
  };
  top["traffic"] = [this](const Value& v) {
    s_.traffic = v.choice<engine::TrafficProfile>(
        {{"saturated", engine::TrafficProfile::Saturated}, {"nonsaturated", engine::TrafficProfile::NonSaturated}});
  };
  top["access"] = [this](const Value& v) {
    s_.access = v.choice<phy::AccessMode>({{"basic", phy::AccessMode::BasicAccess},
                                           {"ba", phy::AccessMode::BasicAccess},
                                           {"rts_cts", phy::AccessMode::RtsCts},
                                           {"rts", phy::AccessMode::RtsCts}});
  };
  top["p_e"] = [this](const Value& v) { s_.p_e = v.real(0.0, 1.0); };
  top["duration"] = [this](const Value& v) {
    s_.duration_s = v.real(0.0, 1e6);
    if (s_.duration_s <= 0) {
      v.fail("duration must be positive");
    }
  };
  top["replications"] = [this](const Value& v) { s_.replications = static_cast<int>(v.integer(1, 100000)); };
  top["seed"] = [this](const Value& v) { s_.seed = v.unsigned64(); };

  auto& src = sections_["sources"];
  for (auto ac : kAllAcs) {
    src[lower(to_string(ac))] = [this, ac](const Value& v) { sources_[index(ac)] = parse_source(v); };
  }

  auto& eca = sections_["eca"];
  eca["hysteresis"] = [this](const Value& v) { s_.eca.hysteresis = v.boolean(); };
  eca["smart_backoff"] = [this](const Value& v) { s_.eca.smart_backoff = v.boolean(); };
  eca["sr_trigger"] = [this](const Value& v) {
    s_.eca.sr_trigger = v.choice<mac::SrTrigger>(
        {{"aggressive", mac::SrTrigger::Aggressive}, {"conservative", mac::SrTrigger::Conservative}});
  };
  eca["sr_reduction"] = [this](const Value& v) {
    s_.eca.sr_reduction = v.choice<mac::SrReduction>(
        {{"half", mac::SrReduction::Half}, {"smaller", mac::SrReduction::Smaller}, {"off", mac::SrReduction::Off}});
  };
  eca["stickiness"] = [this](const Value& v) { s_.eca.stickiness = static_cast<int>(v.integer(0, 64)); };
  eca["stickiness_max"] = [this](const Value& v) { s_.eca.stickiness_max = static_cast<int>(v.integer(0, 64)); };

  auto& phy = sections_["phy"];
  auto& P = s_.phy;
  const auto real_field = [&phy](const char* key, double& field, double lo) {
    phy[key] = [&field, lo](const Value& v) { field = v.real(lo, kBig); };
  };
  const auto int_field = [&phy](const char* key, auto& field, long long lo) {
    phy[key] = [&field, lo](const Value& v) {
      field = static_cast<std::remove_reference_t<decltype(field)>>(v.integer(lo, 1 << 20));
    };
  };
  real_field("data_rate_bps", P.data_rate_bps, 1);
  real_field("channel_width_mhz", P.channel_width_mhz, 1);
  int_field("spatial_streams", P.spatial_streams, 1);
  real_field("empty_slot_us", P.empty_slot_us, 1e-3);
  real_field("difs_us", P.difs_us, 0);
  real_field("sifs_us", P.sifs_us, 0);
  real_field("symbol_us", P.symbol_us, 1e-3);
  real_field("control_rate_bps", P.control_rate_bps, 1);
  real_field("preamble_us", P.preamble_us, 0);
  int_field("rts_bytes", P.rts_bytes, 1);
  int_field("cts_bytes", P.cts_bytes, 1);
  int_field("ack_bytes", P.ack_bytes, 1);
  int_field("block_ack_bytes", P.block_ack_bytes, 1);
  int_field("mac_header_bytes", P.mac_header_bytes, 0);

  auto& voice = sections_["voice"];
  voice["on_mean_s"] = [this](const Value& v) { s_.voice.on_mean_s = v.real(1e-6, kBig); };
  voice["off_mean_s"] = [this](const Value& v) { s_.voice.off_mean_s = v.real(1e-6, kBig); };
  voice["rate_bps"] = [this](const Value& v) { s_.voice.rate_bps = v.real(1, kBig); };
  voice["payload_bytes"] = [this](const Value& v) {
    s_.voice.payload_bytes = static_cast<std::uint32_t>(v.integer(1, traffic::kMaxMpduPayload));
  };

  auto& video = sections_["video"];
  video["gop"] = [this](const Value& v) {
    try {
      s_.video.gop = traffic::parse_gop(v.text);
    } catch (const std::exception& e) {
      v.fail(e.what());
    }
  };
  video["mean_i"] = [this](const Value& v) { s_.video.mean_i = v.real(1, kBig); };
  video["mean_p"] = [this](const Value& v) { s_.video.mean_p = v.real(1, kBig); };
  video["mean_b"] = [this](const Value& v) { s_.video.mean_b = v.real(1, kBig); };
  video["stddev_factor"] = [this](const Value& v) { s_.video.stddev_factor = v.real(0, kBig); };
  video["rate_bps"] = [this](const Value& v) { s_.video.rate_bps = v.real(1, kBig); };

  auto& sat = sections_["saturated"];
  sat["payload_bytes"] = [this](const Value& v) {
    s_.saturated.payload_bytes = static_cast<std::uint32_t>(v.integer(1, 1 << 20));
  };
  sat["fill_packets"] = [this](const Value& v) {
    s_.saturated.fill_packets = static_cast<std::size_t>(v.integer(1, 1 << 20));
  };

  for (auto ac : kAllAcs) {
    const auto name = std::string(to_string(ac));
    auto* e = &s_.edca_params[index(ac)];
    auto* c = &s_.eca_params[index(ac)];
    sections_["edca." + name] = ac_section({e});
    sections_["eca." + name] = ac_section({c});
    sections_["ac." + name] = ac_section({e, c});
  }
}

void Parser::build_stations()
{
  if (!n_) {
    throw ParseError(0, "missing required key 'n'");
  }
  const int n = *n_;
  std::vector<station::Protocol> assignment;
  if (!explicit_.empty()) {
    if (static_cast<int>(explicit_.size()) != n) {
      throw ParseError(assignment_line_, "stations lists " + std::to_string(explicit_.size()) +
                                             " protocols but n = " + std::to_string(n));
    }
    assignment = explicit_;
  } else if (!mix_.empty()) {
    long long total = 0;
    for (const auto& [p, share] : mix_) {
      total += share;
      if (share * n % 100 != 0) {
        throw ParseError(assignment_line_, "protocol_mix share " + std::to_string(share) + "% of n = " +
                                               std::to_string(n) + " is not a whole number of stations");
      }
    }
    if (total != 100) {
      throw ParseError(assignment_line_,
                       "protocol_mix shares sum to " + std::to_string(total) + "%, not covering all stations");
    }
    // Interleave: each station goes to the protocol furthest behind its share.
    std::vector<long long> given(mix_.size(), 0);
    for (int i = 0; i < n; ++i) {
      std::size_t best = 0;
      long long best_deficit = std::numeric_limits<long long>::min();
      for (std::size_t j = 0; j < mix_.size(); ++j) {
        const long long deficit = mix_[j].second * (i + 1) - 100 * given[j];
        if (mix_[j].second > 0 && deficit > best_deficit) {
          best = j;
          best_deficit = deficit;
        }
      }
      ++given[best];
      assignment.push_back(mix_[best].first);
    }
  } else {
    assignment.assign(static_cast<std::size_t>(n), protocol_.value_or(station::Protocol::EcaFairShare));
  }

  auto sources = engine::profile_sources(s_.traffic);
  for (auto ac : kAllAcs) {
    if (sources_[index(ac)]) {
      sources[index(ac)] = *sources_[index(ac)];
    }
  }
  s_.stations.clear();
  for (auto p : assignment) {
    s_.stations.push_back({p, sources});
  }
}

Scenario Parser::run(std::string_view text)
{
  define_sections();
  std::string section;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError(line_no, "unterminated section header");
      }
      auto name = std::string(trim(line.substr(1, line.size() - 2)));
      // AC names are case-insensitive, section words are lower case.
      if (const auto dot = name.find('.'); dot != std::string::npos) {
        std::string ac = name.substr(dot + 1);
        std::transform(ac.begin(), ac.end(), ac.begin(), [](unsigned char c) { return std::toupper(c); });
        name = lower(name.substr(0, dot)) + "." + ac;
      } else {
        name = lower(name);
      }
      if (!sections_.count(name) || name.empty()) {
        throw ParseError(line_no, "unknown section [" + name + "]");
      }
      section = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value'");
    }
    const auto key = lower(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto& handlers = sections_.at(section);
    const auto it = handlers.find(key);
    if (it == handlers.end()) {
      throw ParseError(line_no, "unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
    }
    const auto qualified = section + "/" + key;
    if (const auto prev = seen.find(qualified); prev != seen.end()) {
      throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")");
    }
    seen.emplace(qualified, line_no);
    if (value.empty()) {
      throw ParseError(line_no, "missing value for '" + key + "'");
    }
    it->second(Value{value, line_no});
  }

  for (auto ac : kAllAcs) {
    for (auto* set : {&s_.edca_params, &s_.eca_params}) {
      auto& p = (*set)[index(ac)];
      p = mac::make_params(p.cw_min, p.cw_max, p.max_stage, p.aifsn, p.txop_limit_us, p.priority_rank);
    }
  }
  build_stations();
  try {
    s_.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return s_;
}

} // namespace

engine::Scenario parse_scenario(std::string_view text)
{
  return Parser{}.run(text);
}

engine::Scenario load_scenario(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(0, "cannot read '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e.line(), e.detail());
  }
}

} // namespace ecasim::config
