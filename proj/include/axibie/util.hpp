#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "axibie/errors.hpp"

namespace axibie {

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw err_non_finite(std::string(name) + " is not finite");
}

// Deterministic shortest-faithful formatting: 17 significant digits always
// round-trips an IEEE double and is byte-stable across platforms/locales.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// FNV-1a 64-bit hash; used to stamp output files with a configuration digest.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace axibie
