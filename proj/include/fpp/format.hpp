#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>
#include <type_traits>

namespace fpp {

// Locale-independent number formatting for CSV and JSON reports.

template <class Int>
  requires std::is_integral_v<Int>
inline void append_int(std::string& out, Int v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

// Shortest round-trip representation.
inline void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

// Fixed number of decimals.
inline void append_fixed(std::string& out, double v, int decimals) {
  char buf[128];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  out.append(buf, ptr);
}

inline std::string fmt_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

}  // namespace fpp
