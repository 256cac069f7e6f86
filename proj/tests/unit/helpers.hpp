#pragma once

#include "abvar/latalg/matrix.hpp"

#include <random>

namespace testing_helpers {

using abvar::Integer;
using abvar::IntMatrix;
using abvar::Rational;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

inline IntMatrix random_int_matrix(size_t r, size_t c, long lo, long hi) {
  IntMatrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

/// Product of random elementary operations: unimodular by construction.
inline IntMatrix random_unimodular(size_t n, int steps = 12) {
  IntMatrix u = IntMatrix::identity(n);
  for (int s = 0; s < steps; ++s) {
    size_t a = static_cast<size_t>(uniform(0, static_cast<long>(n) - 1));
    size_t b = static_cast<size_t>(uniform(0, static_cast<long>(n) - 1));
    if (a == b) {
      for (size_t j = 0; j < n; ++j) u(a, j) = -u(a, j);
      continue;
    }
    long c = uniform(-2, 2);
    for (size_t j = 0; j < n; ++j) u(a, j) += c * u(b, j);
  }
  return u;
}

inline Rational random_rational(long h) {
  long den = uniform(1, h);
  return abvar::make_rational(uniform(-h, h), den);
}

}  // namespace testing_helpers
