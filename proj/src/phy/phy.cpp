#include "ecasim/phy/phy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ecasim::phy {

void PhyParams::validate() const
{
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("phy parameter must be positive: ") + name);
    }
  };
  positive(data_rate_bps, "rate");
  positive(channel_width_mhz, "channel_width");
  positive(spatial_streams, "streams");
  positive(empty_slot_us, "empty_slot");
  positive(difs_us, "difs");
  positive(sifs_us, "sifs");
  positive(symbol_us, "symbol");
  positive(control_rate_bps, "control_rate");
  positive(preamble_us, "preamble");
  positive(rts_bytes, "rts_bytes");
  positive(cts_bytes, "cts_bytes");
  positive(ack_bytes, "ack_bytes");
  positive(block_ack_bytes, "block_ack_bytes");
  positive(mac_header_bytes, "mac_header_bytes");
}

double tx_time_us(std::uint64_t bytes, double rate_bps, double symbol_us)
{
  if (bytes == 0) {
    throw std::invalid_argument("tx_time_us: zero-byte transmission");
  }
  const double raw_us = static_cast<double>(bytes) * 8.0 / rate_bps * 1e6;
  // Guard against 185.0000000001 style round-up from the division.
  const double symbols = std::ceil(raw_us / symbol_us - 1e-9);
  return symbols * symbol_us;
}

double ppdu_time_us(std::uint64_t bytes, double rate_bps, const PhyParams& phy)
{
  return phy.preamble_us + tx_time_us(bytes, rate_bps, phy.symbol_us);
}

double data_airtime_us(std::span<const std::uint32_t> mpdu_payloads, const PhyParams& phy)
{
  std::uint64_t total = 0;
  for (auto b : mpdu_payloads) {
    total += static_cast<std::uint64_t>(b) + phy.mac_header_bytes;
  }
  return ppdu_time_us(total, phy.data_rate_bps, phy);
}

double ack_airtime_us(std::size_t mpdu_count, const PhyParams& phy)
{
  const auto bytes = mpdu_count > 1 ? phy.block_ack_bytes : phy.ack_bytes;
  return ppdu_time_us(bytes, phy.control_rate_bps, phy);
}

namespace {

double rts_cts_overhead_us(const PhyParams& phy)
{
  return ppdu_time_us(phy.rts_bytes, phy.control_rate_bps, phy) + phy.sifs_us
         + ppdu_time_us(phy.cts_bytes, phy.control_rate_bps, phy) + phy.sifs_us;
}

} // namespace

double exchange_time_us(double data_airtime, std::size_t mpdu_count, AccessMode mode, const PhyParams& phy)
{
  double t = data_airtime + phy.sifs_us + ack_airtime_us(mpdu_count, phy);
  if (mode == AccessMode::RtsCts) {
    t += rts_cts_overhead_us(phy);
  }
  return t;
}

double success_duration_us(double data_airtime, std::size_t mpdu_count, AccessMode mode, const PhyParams& phy)
{
  return phy.difs_us + exchange_time_us(data_airtime, mpdu_count, mode, phy);
}

double collision_duration_us(double longest_data_airtime, AccessMode mode, const PhyParams& phy)
{
  if (mode == AccessMode::RtsCts) {
    // RTS, then the CTS timeout.
    return phy.difs_us + ppdu_time_us(phy.rts_bytes, phy.control_rate_bps, phy) + phy.sifs_us
           + ppdu_time_us(phy.cts_bytes, phy.control_rate_bps, phy);
  }
  return phy.difs_us + longest_data_airtime + phy.sifs_us + ack_airtime_us(1, phy);
}

DeliveryVerdict apply_channel_errors(std::size_t mpdu_count, const ErrorModel& model, RandomStream& rng)
{
  if (mpdu_count == 0 || mpdu_count > 64) {
    throw std::invalid_argument("apply_channel_errors: mpdu count must be in [1, 64]");
  }
  DeliveryVerdict v;
  for (std::size_t i = 0; i < mpdu_count; ++i) {
    // Draw even when p_e is 0 or 1 so the stream position depends only on the unit size.
    if (rng.uniform01() >= model.p_e) {
      v.delivered_mask |= std::uint64_t{1} << i;
      ++v.delivered_count;
    }
  }
  v.success = v.delivered_count > 0;
  return v;
}

} // namespace ecasim::phy
