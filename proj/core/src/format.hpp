#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace oneid::detail {

// Shortest round-trip representation; identical on every run.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

// JSON has no infinities; emit null for them.
inline std::string json_double(double x) {
  if (!std::isfinite(x)) return "null";
  return format_double(x);
}

}  // namespace oneid::detail
