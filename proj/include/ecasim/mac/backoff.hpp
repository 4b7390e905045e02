#pragma once

#include "ecasim/mac/ac_params.hpp"
#include "ecasim/random.hpp"

namespace ecasim::mac {

/// CW(k) = 2^k * CW_min. Not clamped at cw_max; callers clamp where the protocol does.
int contention_window(const AcParams& params, int stage);

/// Uniform draw over [0, CW(k) - 1].
int draw_random_backoff(const AcParams& params, int stage, RandomStream& rng);

/// B_d(k) = ceil(CW(k) / 2) - 1. The transmission cycle it produces is B_d(k) + 1 slots.
int deterministic_backoff(const AcParams& params, int stage);

/// AIFS[AC] = SIFS + slot * (AIFSN - 1).
double aifs_duration_us(const AcParams& params, double sifs_us, double slot_us);

/// Idle slots an AC waits after a busy slot beyond DIFS, i.e. AIFSN - 3 (never negative).
int aifs_surplus_slots(const AcParams& params);

} // namespace ecasim::mac
