#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>
#include <variant>
#include <vector>

#include "ecasim/random.hpp"

namespace ecasim::traffic {

inline constexpr std::uint32_t kMaxMpduPayload = 1470;
inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// Splits a frame into MPDU payloads: full-size MPDUs followed by the remainder.
std::vector<std::uint32_t> packetize(std::uint64_t frame_bytes, std::uint32_t max_payload = kMaxMpduPayload);

struct SaturatedParams
{
  std::uint32_t payload_bytes = 1470;
  std::size_t fill_packets = 1000;
};

struct VoiceParams
{
  double on_mean_s = 3.110;
  double off_mean_s = 3.2727;
  double rate_bps = 15200.0;
  std::uint32_t payload_bytes = 38;

  double packet_interval_s() const { return payload_bytes * 8.0 / rate_bps; }
  void validate() const;
};

enum class FrameType : std::uint8_t { I, P, B };

struct VideoParams
{
  std::array<FrameType, 16> gop{};
  double mean_i = 5658.0;
  double mean_p = 1634.0;
  double mean_b = 348.0;
  double stddev_factor = 2.0;
  double rate_bps = 300e3;

  VideoParams();
  double mean_of(FrameType t) const;
  void validate() const;
};

/// Parses a pattern such as "IBBBPBBBPBBBPBBB".
std::array<FrameType, 16> parse_gop(std::string_view pattern);

/// Mean of max(1, round(X)) for X ~ N(mu, sigma), the expected size of a
/// truncated frame draw.
double truncated_frame_mean(double mu, double sigma);

/// Interval between consecutive frames such that the long-run byte rate of the
/// truncated draws equals rate_bps.
double video_frame_period_s(const VideoParams& params);

/// One or more MPDUs entering a queue at the same instant.
struct Emission
{
  double time_us = 0;
  std::vector<std::uint32_t> mpdus;
};

/// On/Off CBR voice source with exponentially distributed phase durations.
class VoiceSource
{
public:
  VoiceSource(const VoiceParams& params, RandomStream rng, double start_us = 0.0);

  double next_time_us() const { return next_packet_us_; }
  /// Returns the pending packet and schedules the next one.
  Emission pop();

  bool in_on_phase() const { return next_packet_us_ < phase_end_us_; }
  double total_on_us() const { return on_accum_us_; }

private:
  void schedule_after(double t_us);

  VoiceParams params_;
  RandomStream rng_;
  double phase_end_us_ = 0;    // end of the current On phase
  double next_packet_us_ = 0;
  double on_accum_us_ = 0;
};

/// GOP-cadenced video source with truncated-normal frame sizes.
class VideoSource
{
public:
  VideoSource(const VideoParams& params, RandomStream rng, double start_us = 0.0);

  double next_time_us() const { return next_frame_us_; }
  Emission pop();

  /// GOP position of the next frame to be emitted.
  std::size_t gop_position() const { return position_; }
  FrameType next_type() const { return params_.gop[position_]; }
  /// Untruncated size of the most recently emitted frame.
  double last_raw_size() const { return last_raw_; }
  std::uint64_t last_size() const { return last_size_; }
  double frame_period_us() const { return period_us_; }

private:
  VideoParams params_;
  RandomStream rng_;
  double period_us_;
  double next_frame_us_;
  std::size_t position_ = 0;
  double last_raw_ = 0;
  std::uint64_t last_size_ = 0;
};

/// Always-backlogged source; its queue is refilled on every delivery.
struct SaturatedSource
{
  SaturatedParams params;
};

struct NoSource
{
};

using Source = std::variant<NoSource, SaturatedSource, VoiceSource, VideoSource>;

/// Time of the next arrival, or kNever for saturated and absent sources.
double next_arrival_us(const Source& source);

} // namespace ecasim::traffic
