#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ecasim/engine/scenario.hpp"

namespace ecasim::config {

/// Parse failure. line() is 1-based, 0 for whole-scenario problems.
class ParseError : public std::runtime_error
{
public:
  ParseError(int line, const std::string& message);
  /// Message prefixed with "source:line: ".
  ParseError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }
  /// The message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  int line_;
  std::string detail_;
};

/// Parses the `key = value` scenario format described in docs/scenario-format.md.
/// Unspecified fields keep their defaults. The result is validated.
engine::Scenario parse_scenario(std::string_view text);

/// Reads and parses a scenario file. I/O failures are reported as ParseError
/// with line 0.
engine::Scenario load_scenario(const std::filesystem::path& path);

} // namespace ecasim::config
