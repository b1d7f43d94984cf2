#pragma once

#include <cmath>
#include <numbers>
#include <random>

namespace bergman {

using Rng = std::mt19937_64;

// Fixed conversions so results do not depend on the library's distributions.
inline double uniform01(Rng& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& g, double lo, double hi) { return lo + (hi - lo) * uniform01(g); }

inline double standard_normal(Rng& g) {
  double u1 = uniform01(g);
  while (u1 <= 0.0) u1 = uniform01(g);
  double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace bergman
