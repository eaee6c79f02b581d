#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "cclf/error.hpp"

namespace cclf {

// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    fail(ErrorCode::kBadArtifact, "'" + std::string(text) + "' is not a number");
  }
  return value;
}

}  // namespace cclf
