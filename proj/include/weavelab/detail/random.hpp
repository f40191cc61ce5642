#pragma once

#include <cstdint>
#include <random>

namespace weavelab::detail {

// std distributions are implementation-defined; reports must be reproducible
// across standard libraries, so draws are built from raw engine output.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline bool coin(Rng& rng) { return (rng() >> 63) != 0; }

/// Uniform index in [0, n) (n > 0), by rejection.
inline std::uint64_t index_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

}  // namespace weavelab::detail
