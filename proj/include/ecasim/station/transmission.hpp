#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ecasim/access_category.hpp"
#include "ecasim/mac/ac_params.hpp"
#include "ecasim/phy/phy.hpp"
#include "ecasim/station/queue.hpp"

namespace ecasim::station {

enum class Protocol : std::uint8_t { Edca, EcaFairShare, EcaTxop };

std::string_view to_string(Protocol p) noexcept;
std::optional<Protocol> parse_protocol(std::string_view name) noexcept;
constexpr bool is_eca(Protocol p) noexcept { return p != Protocol::Edca; }

enum class AggregationPolicy : std::uint8_t { SingleMsdu, FairShare, Txop };

/// Only VO and VI aggregate; EDCA and the TXOP variant use TXOP bursts there.
AggregationPolicy aggregation_policy(Protocol protocol, Ac ac) noexcept;

enum class UnitKind : std::uint8_t { SingleMsdu, Ampdu, TxopBurst };

inline constexpr std::size_t kMaxAmpduMpdus = 32;

/// What one contention win puts on the air.
struct TransmissionUnit
{
  UnitKind kind = UnitKind::SingleMsdu;
  std::vector<std::uint32_t> mpdus;
  double airtime_us = 0; // data PPDU airtime
  int station = 0;
  Ac ac = Ac::BE;
};

/// Assembles the unit from the head of `queue` without removing anything.
/// Fair Share takes min(2^k, queue length, 32) MPDUs; TXOP takes MPDUs while
/// the whole exchange stays within the TXOP limit (at least one).
/// Throws std::logic_error on an empty queue.
TransmissionUnit build_transmission(int station, Ac ac, AggregationPolicy policy, int stage,
                                    const mac::AcParams& params, const MacQueue& queue, const phy::PhyParams& phy,
                                    phy::AccessMode mode);

struct VirtualCollision
{
  Ac winner;
  std::vector<Ac> losers;
};

/// Grants the slot to the highest-priority ready AC of a station.
/// Throws std::logic_error when `ready` is empty.
VirtualCollision resolve_virtual_collision(std::span<const Ac> ready);

} // namespace ecasim::station
