#pragma once

#include <cstdint>
#include <span>

#include "ecasim/random.hpp"

namespace ecasim::phy {

enum class AccessMode : std::uint8_t { BasicAccess, RtsCts };

/// PHY timing and control-frame constants. Defaults follow the 802.11ax 5 GHz
/// single-stream 20 MHz profile used throughout the simulator.
struct PhyParams
{
  double data_rate_bps = 65e6;
  double channel_width_mhz = 20.0;
  int spatial_streams = 1;
  double empty_slot_us = 9.0;
  double difs_us = 34.0;
  double sifs_us = 16.0;
  double symbol_us = 4.0;
  double control_rate_bps = 6e6;
  double preamble_us = 20.0;
  std::uint32_t rts_bytes = 20;
  std::uint32_t cts_bytes = 14;
  std::uint32_t ack_bytes = 14;
  std::uint32_t block_ack_bytes = 32;
  std::uint32_t mac_header_bytes = 36;

  /// Throws std::invalid_argument naming the first non-positive field.
  void validate() const;
};

/// Payload transmission time in microseconds, rounded up to whole symbols.
/// Throws std::invalid_argument for bytes == 0.
double tx_time_us(std::uint64_t bytes, double rate_bps, double symbol_us);

/// Airtime of one PPDU (preamble + symbol-rounded payload).
double ppdu_time_us(std::uint64_t bytes, double rate_bps, const PhyParams& phy);

/// Airtime of a data PPDU carrying the given MPDU payloads (one MAC header each).
double data_airtime_us(std::span<const std::uint32_t> mpdu_payloads, const PhyParams& phy);

/// ACK for a single MPDU, compressed Block ACK for aggregates.
double ack_airtime_us(std::size_t mpdu_count, const PhyParams& phy);

/// Channel time of a complete exchange after the DIFS, i.e. what a TXOP limit bounds.
double exchange_time_us(double data_airtime, std::size_t mpdu_count, AccessMode mode, const PhyParams& phy);

/// Busy-slot durations (DIFS included). A channel-error failure occupies the
/// channel for the same time as a success: the exchange ends in an ACK timeout.
double success_duration_us(double data_airtime, std::size_t mpdu_count, AccessMode mode, const PhyParams& phy);
double collision_duration_us(double longest_data_airtime, AccessMode mode, const PhyParams& phy);

/// Per-MPDU non-acknowledgement model.
struct ErrorModel
{
  double p_e = 0.0;
};

struct DeliveryVerdict
{
  std::uint64_t delivered_mask = 0; // bit i set when MPDU i was acknowledged
  std::size_t delivered_count = 0;
  bool success = false; // at least one MPDU acknowledged
};

/// Each MPDU independently fails with probability p_e; the attempt fails only
/// when every MPDU failed. Supports up to 64 MPDUs.
DeliveryVerdict apply_channel_errors(std::size_t mpdu_count, const ErrorModel& model, RandomStream& rng);

} // namespace ecasim::phy
