#pragma once

#include <random>

namespace unf::test {

/// Fixed-seed generator so property tests are reproducible.
inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20241016);
  return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

}  // namespace unf::test
