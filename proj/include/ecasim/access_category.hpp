#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace ecasim {

/// The four EDCA access categories. Enumerator order is priority order,
/// highest first, so iterating over kAllAcs visits VO before BK.
enum class Ac : std::uint8_t { VO = 0, VI = 1, BE = 2, BK = 3 };

inline constexpr std::size_t kNumAcs = 4;
inline constexpr std::array<Ac, kNumAcs> kAllAcs{Ac::VO, Ac::VI, Ac::BE, Ac::BK};

constexpr std::size_t index(Ac ac) noexcept { return static_cast<std::size_t>(ac); }

/// True when a has strictly higher channel-access priority than b.
constexpr bool higher_priority(Ac a, Ac b) noexcept { return index(a) < index(b); }

constexpr std::string_view to_string(Ac ac) noexcept
{
  switch (ac) {
  case Ac::VO: return "VO";
  case Ac::VI: return "VI";
  case Ac::BE: return "BE";
  case Ac::BK: return "BK";
  }
  return "?";
}

std::optional<Ac> parse_ac(std::string_view name) noexcept;

/// VO and VI are the only categories allowed to aggregate frames.
constexpr bool is_high_priority(Ac ac) noexcept { return ac == Ac::VO || ac == Ac::VI; }

} // namespace ecasim
