#include "ecasim/station/transmission.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include "ecasim/mac/protocols.hpp"

namespace ecasim::station {

std::string_view to_string(Protocol p) noexcept
{
  switch (p) {
  case Protocol::Edca: return "edca";
  case Protocol::EcaFairShare: return "eca_fs";
  case Protocol::EcaTxop: return "eca_txop";
  }
  return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name) noexcept
{
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(s.begin(), s.end(), '-', '_');
  std::replace(s.begin(), s.end(), '+', '_');
  if (s == "edca") {
    return Protocol::Edca;
  }
  if (s == "eca_fs" || s == "eca" || s == "eca_qos_fs") {
    return Protocol::EcaFairShare;
  }
  if (s == "eca_txop" || s == "eca_qos_txop") {
    return Protocol::EcaTxop;
  }
  return std::nullopt;
}

AggregationPolicy aggregation_policy(Protocol protocol, Ac ac) noexcept
{
  if (!is_high_priority(ac)) {
    return AggregationPolicy::SingleMsdu;
  }
  return protocol == Protocol::EcaFairShare ? AggregationPolicy::FairShare : AggregationPolicy::Txop;
}

TransmissionUnit build_transmission(int station, Ac ac, AggregationPolicy policy, int stage,
                                    const mac::AcParams& params, const MacQueue& queue, const phy::PhyParams& phy,
                                    phy::AccessMode mode)
{
  if (queue.empty()) {
    throw std::logic_error("build_transmission: empty queue");
  }
  TransmissionUnit u;
  u.station = station;
  u.ac = ac;

  std::size_t count = 1;
  if (policy == AggregationPolicy::FairShare) {
    const auto share = static_cast<std::size_t>(mac::fair_share_count(stage));
    count = std::min({share, queue.size(), kMaxAmpduMpdus});
    u.kind = UnitKind::Ampdu;
  } else if (policy == AggregationPolicy::Txop && params.txop_limit_us > 0) {
    u.kind = UnitKind::TxopBurst;
    std::vector<std::uint32_t> trial{queue[0].bytes};
    while (count < queue.size() && count < kMaxAmpduMpdus) {
      trial.push_back(queue[count].bytes);
      const double t = phy::exchange_time_us(phy::data_airtime_us(trial, phy), trial.size(), mode, phy);
      if (t > params.txop_limit_us) {
        break;
      }
      ++count;
    }
  }

  u.mpdus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    u.mpdus.push_back(queue[i].bytes);
  }
  if (u.kind == UnitKind::Ampdu && count == 1) {
    u.kind = UnitKind::SingleMsdu;
  }
  u.airtime_us = phy::data_airtime_us(u.mpdus, phy);
  return u;
}

VirtualCollision resolve_virtual_collision(std::span<const Ac> ready)
{
  if (ready.empty()) {
    throw std::logic_error("resolve_virtual_collision: nothing ready");
  }
  VirtualCollision vc{ready.front(), {}};
  for (auto ac : ready) {
    if (higher_priority(ac, vc.winner)) {
      vc.winner = ac;
    }
  }
  for (auto ac : ready) {
    if (ac != vc.winner) {
      vc.losers.push_back(ac);
    }
  }
  return vc;
}

} // namespace ecasim::station
