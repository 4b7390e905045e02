#include "ecasim/traffic/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ecasim::traffic {

std::vector<std::uint32_t> packetize(std::uint64_t frame_bytes, std::uint32_t max_payload)
{
  if (frame_bytes == 0 || max_payload == 0) {
    throw std::invalid_argument("packetize: frame and payload sizes must be positive");
  }
  std::vector<std::uint32_t> out(frame_bytes / max_payload, max_payload);
  if (const auto rest = frame_bytes % max_payload; rest != 0) {
    out.push_back(static_cast<std::uint32_t>(rest));
  }
  return out;
}

void VoiceParams::validate() const
{
  if (!(on_mean_s > 0) || !(off_mean_s > 0) || !(rate_bps > 0) || payload_bytes == 0) {
    throw std::invalid_argument("voice parameters must be strictly positive");
  }
}

std::array<FrameType, 16> parse_gop(std::string_view pattern)
{
  if (pattern.size() != 16) {
    throw std::invalid_argument("GOP pattern must have 16 frames");
  }
  std::array<FrameType, 16> gop{};
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    switch (pattern[i]) {
    case 'I': gop[i] = FrameType::I; break;
    case 'P': gop[i] = FrameType::P; break;
    case 'B': gop[i] = FrameType::B; break;
    default: throw std::invalid_argument("GOP pattern may only contain I, P and B");
    }
  }
  return gop;
}

VideoParams::VideoParams() : gop(parse_gop("IBBBPBBBPBBBPBBB")) {}

double VideoParams::mean_of(FrameType t) const
{
  switch (t) {
  case FrameType::I: return mean_i;
  case FrameType::P: return mean_p;
  case FrameType::B: return mean_b;
  }
  return 0;
}

void VideoParams::validate() const
{
  if (!(mean_i > 0) || !(mean_p > 0) || !(mean_b > 0) || !(stddev_factor >= 0) || !(rate_bps > 0)) {
    throw std::invalid_argument("video parameters out of range");
  }
}

double truncated_frame_mean(double mu, double sigma)
{
  if (sigma <= 0) {
    return std::max(1.0, std::round(mu));
  }
  // Draws below 1.5 round to at most 1 and are clamped to 1; above that the
  // rounding is symmetric and leaves the mean unchanged.
  const double a = (1.5 - mu) / sigma;
  const double below = 0.5 * std::erfc(-a / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
  return below + mu * (1.0 - below) + sigma * pdf;
}

double video_frame_period_s(const VideoParams& params)
{
  double gop_bytes = 0;
  for (auto t : params.gop) {
    const double mu = params.mean_of(t);
    gop_bytes += truncated_frame_mean(mu, params.stddev_factor * mu);
  }
  return gop_bytes * 8.0 / params.rate_bps / static_cast<double>(params.gop.size());
}

VoiceSource::VoiceSource(const VoiceParams& params, RandomStream rng, double start_us)
    : params_(params), rng_(std::move(rng))
{
  params_.validate();
  // Phase durations are memoryless, so starting in the stationary phase mix
  // with a fresh residual is equivalent to a long warm-up.
  const double p_on = params_.on_mean_s / (params_.on_mean_s + params_.off_mean_s);
  if (rng_.bernoulli(p_on)) {
    phase_end_us_ = start_us + rng_.exponential(params_.on_mean_s) * 1e6;
    next_packet_us_ = start_us;
    on_accum_us_ += phase_end_us_ - start_us;
  } else {
    schedule_after(start_us + rng_.exponential(params_.off_mean_s) * 1e6);
  }
}

void VoiceSource::schedule_after(double t_us)
{
  const double on = rng_.exponential(params_.on_mean_s) * 1e6;
  next_packet_us_ = t_us;
  phase_end_us_ = t_us + on;
  on_accum_us_ += on;
}

Emission VoiceSource::pop()
{
  Emission e{next_packet_us_, {params_.payload_bytes}};
  const double next = next_packet_us_ + params_.packet_interval_s() * 1e6;
  if (next < phase_end_us_) {
    next_packet_us_ = next;
  } else {
    schedule_after(phase_end_us_ + rng_.exponential(params_.off_mean_s) * 1e6);
  }
  return e;
}

VideoSource::VideoSource(const VideoParams& params, RandomStream rng, double start_us)
    : params_(params), rng_(std::move(rng)), period_us_(video_frame_period_s(params) * 1e6)
{
  params_.validate();
  // Random GOP phase so that co-started sources are not frame-aligned.
  next_frame_us_ = start_us + rng_.uniform01() * period_us_;
  position_ = static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(params_.gop.size()) - 1));
}

Emission VideoSource::pop()
{
  const double mu = params_.mean_of(params_.gop[position_]);
  last_raw_ = rng_.normal(mu, params_.stddev_factor * mu);
  last_size_ = static_cast<std::uint64_t>(std::max(1.0, std::round(last_raw_)));
  Emission e{next_frame_us_, packetize(last_size_)};
  position_ = (position_ + 1) % params_.gop.size();
  next_frame_us_ += period_us_;
  return e;
}

double next_arrival_us(const Source& source)
{
  if (const auto* v = std::get_if<VoiceSource>(&source)) {
    return v->next_time_us();
  }
  if (const auto* v = std::get_if<VideoSource>(&source)) {
    return v->next_time_us();
  }
  return kNever;
}

} // namespace ecasim::traffic
