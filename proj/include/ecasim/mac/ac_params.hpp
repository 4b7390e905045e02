#pragma once

#include <array>

#include "ecasim/access_category.hpp"

namespace ecasim::mac {

/// Maximum retransmission attempts for one head-of-line unit.
inline constexpr int kMaxRetries = 7;

/// AIFSN whose AIFS equals DIFS (16 + 9 * 2 = 34 us).
inline constexpr int kDifsAifsn = 3;

/// Static contention parameters of one access category.
struct AcParams
{
  int cw_min = 0;
  int cw_max = 0;
  int max_stage = 0;       // m
  int aifsn = kDifsAifsn;
  double txop_limit_us = 0; // 0: a single MSDU per access
  int bd_lowest = 0;        // deterministic backoff at stage 0
  int bd_highest = 0;       // deterministic backoff at stage m
  int priority_rank = 0;    // VO 4 > VI 3 > BE 2 > BK 1 > Legacy 0

  friend bool operator==(const AcParams&, const AcParams&) = default;
};

/// Builds a row, deriving the deterministic-backoff bounds from (cw_min, m).
AcParams make_params(int cw_min, int cw_max, int max_stage, int aifsn, double txop_limit_us, int priority_rank);

using AcParamSet = std::array<AcParams, kNumAcs>;

namespace presets {

/// Default EDCA parameters (CW, m, AIFSN, TXOP limit).
AcParams edca(Ac ac);
AcParams edca_legacy();
AcParamSet edca_all();

/// CSMA/ECA_QoS contention parameters. All categories share the DIFS
/// waiting time; TXOP limits are the EDCA values, used only by the TXOP variant.
AcParams eca(Ac ac);
AcParams eca_legacy();
AcParamSet eca_all();

} // namespace presets

} // namespace ecasim::mac
