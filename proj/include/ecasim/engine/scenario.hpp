#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ecasim/access_category.hpp"
#include "ecasim/mac/ac_params.hpp"
#include "ecasim/mac/protocols.hpp"
#include "ecasim/phy/phy.hpp"
#include "ecasim/station/transmission.hpp"
#include "ecasim/traffic/sources.hpp"

namespace ecasim::engine {

enum class SourceKind : std::uint8_t { None, Saturated, Voice, Video };
enum class TrafficProfile : std::uint8_t { Saturated, NonSaturated };

std::string_view to_string(SourceKind k) noexcept;
std::string_view to_string(TrafficProfile t) noexcept;

/// Saturated: every AC saturated. Non-saturated: voice on VO, video on VI,
/// saturated BE and BK.
std::array<SourceKind, kNumAcs> profile_sources(TrafficProfile profile) noexcept;

struct StationSpec
{
  station::Protocol protocol = station::Protocol::Edca;
  std::array<SourceKind, kNumAcs> sources = profile_sources(TrafficProfile::Saturated);

  friend bool operator==(const StationSpec&, const StationSpec&) = default;
};

struct Scenario
{
  std::vector<StationSpec> stations;
  TrafficProfile traffic = TrafficProfile::Saturated;
  phy::PhyParams phy{};
  phy::AccessMode access = phy::AccessMode::BasicAccess;
  double p_e = 0.0;
  double duration_s = 40.0;
  int replications = 1;
  std::uint64_t seed = 1;
  mac::EcaConfig eca{};
  mac::AcParamSet edca_params = mac::presets::edca_all();
  mac::AcParamSet eca_params = mac::presets::eca_all();
  traffic::VoiceParams voice{};
  traffic::VideoParams video{};
  traffic::SaturatedParams saturated{};

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  /// n identical stations running `protocol` with the profile's sources.
  static Scenario uniform(int n, station::Protocol protocol, TrafficProfile profile = TrafficProfile::Saturated);
  /// Alternating assignment starting with `first`: stations 0, 2, ... use
  /// `first`, stations 1, 3, ... use `second`.
  static Scenario mixed(int n, station::Protocol first, station::Protocol second,
                        TrafficProfile profile = TrafficProfile::Saturated);

  /// Copy with n stations, repeating the current station pattern cyclically.
  Scenario with_station_count(int n) const;
};

/// Stable 64-bit digest of everything that shapes a run except the seed and
/// the replication count.
std::uint64_t fingerprint(const Scenario& scenario);

} // namespace ecasim::engine
