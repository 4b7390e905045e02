#include "ecasim/access_category.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace ecasim {

std::optional<Ac> parse_ac(std::string_view name) noexcept
{
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto ac : kAllAcs) {
    if (upper == to_string(ac)) {
      return ac;
    }
  }
  return std::nullopt;
}

} // namespace ecasim
