#pragma once

#include "abvar/pav/pav.hpp"

#include <array>
#include <vector>

namespace fixtures {

using namespace abvar;

inline ExactComplex q(long p, long d = 1) { return ExactComplex(make_rational(p, d)); }

/// a + b sqrt(r) with a = an/ad, b = bn/bd.
inline ExactComplex quad(long an, long ad, long bn, long bd, long r) {
  return ExactComplex(quadratic_element(make_rational(an, ad), make_rational(bn, bd), r));
}

inline IntMatrix int_matrix(const std::vector<std::vector<long>>& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

/// Riemann matrix of the principally polarized surface: [[(1+i√2)/2, -1/2], [-1/2, (1+i√2)/2]].
inline CMatrix z_surface() {
  ExactComplex diag = quad(1, 2, 1, 2, -2);
  CMatrix z(2, 2);
  z(0, 0) = diag;
  z(1, 1) = diag;
  z(0, 1) = q(-1, 2);
  z(1, 0) = q(-1, 2);
  return z;
}

inline pav::PolarizedAV surface() { return pav::build_period(pav::make_type({1, 1}), z_surface()); }

/// The two restricted generators printed for the surface (already transposed into column convention).
inline std::vector<IntMatrix> surface_generators() {
  IntMatrix a = int_matrix({{0, 0, 1, 1}, {1, -1, -1, 1}, {-1, 0, 1, 0}, {1, -1, -1, 0}}).transpose();
  IntMatrix b = int_matrix({{-1, 1, 1, -1}, {0, 0, 1, 1}, {-1, 1, 0, -1}, {0, -1, 0, 1}}).transpose();
  return {a, b};
}

/// Sum isogeny matrix (u1, v1, u2, v2).
inline IntMatrix surface_sum_isogeny() {
  return int_matrix({{1, 1, 0, 0}, {-1, 1, -1, 1}, {0, 0, 1, 1}, {1, -1, 0, 0}});
}

inline RatMatrix surface_f_omega() {
  long f[4][4] = {{1, 0, 0, 1}, {-1, 1, -1, 0}, {0, -1, 1, -1}, {1, 0, 0, 1}};
  RatMatrix m(4, 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) m(i, j) = make_rational(f[i][j], 2);
  return m;
}

/// Raw genus-two factor of the genus-eleven example: 4 * [[1, 0, 3i√6/2, 2i√6], [0, 3, 2i√6, 3i√6]].
inline pav::PolarizationType raw_eleven_type() { return pav::make_type({4, 12}); }
inline CMatrix raw_eleven_z() {
  CMatrix z(2, 2);
  z(0, 0) = quad(0, 1, 6, 1, -6);
  z(0, 1) = quad(0, 1, 8, 1, -6);
  z(1, 0) = quad(0, 1, 8, 1, -6);
  z(1, 1) = quad(0, 1, 12, 1, -6);
  return z;
}

inline CMatrix diag_z(const ExactComplex& a, const ExactComplex& b) {
  CMatrix z(2, 2);
  z(0, 0) = a;
  z(1, 1) = b;
  return z;
}

inline ExactComplex i_times(long n) { return quad(0, 1, n, 1, -1); }

/// Reduced binary quadratic form (a, b, c) attached to a quadratic imaginary tau; equal forms
/// characterize SL2(Z)-equivalent moduli.
inline std::array<Integer, 3> reduced_form(const ExactComplex& tau) {
  auto poly = find_minimal_polynomial(eval_numeric(tau, 256), 2, 256);
  if (!poly || poly->size() != 3) throw std::runtime_error("tau is not quadratic");
  Integer a = (*poly)[2], b = (*poly)[1], c = (*poly)[0];
  for (;;) {
    if (a > c) {
      std::swap(a, c);
      b = -b;
      continue;
    }
    if (b > a || b <= -a) {
      // translate tau -> tau + k to bring b into (-a, a]
      Integer two_a = 2 * a;
      Integer k = b - a;
      mpz_cdiv_q(k.get_mpz_t(), k.get_mpz_t(), two_a.get_mpz_t());
      c = a * k * k - b * k + c;
      b = b - two_a * k;
      continue;
    }
    if (a == c && b < 0) b = -b;
    break;
  }
  return {a, b, c};
}

}  // namespace fixtures
