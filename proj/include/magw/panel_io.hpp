#pragma once

#include "magw/types.hpp"

namespace magw {

/// Input error with a 1-based source line number (0 when not line specific).
struct ParseError : std::runtime_error {
  int line = 0;
  ParseError(int line_, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_) + ": " + message),
        line(line_) {}
  explicit ParseError(const std::string& message) : std::runtime_error(message) {}
};

/// Long-format CSV: header `alternative,indicator,<expert...>`, one row per
/// (alternative, indicator) pair, alternative-major.
ScorePanel parse_panel(const std::string& csv_text);
ScorePanel load_panel(const std::string& path);

/// Inverse of parse_panel; reproduces the numeric content exactly.
std::string serialize_panel(const ScorePanel& panel);

}  // namespace magw
