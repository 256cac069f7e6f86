#pragma once

#include "abvar/latalg/linear.hpp"
#include "abvar/pav/cmatrix.hpp"

#include <string>
#include <vector>

namespace abvar::pav {

struct PolarizationType {
  std::vector<Integer> d;

  size_t g() const { return d.size(); }
  /// d_i | d_{i+1} for all i.
  bool canonical() const;
  bool principal() const;
  /// gcd of all d_i.
  Integer content() const;
  std::string to_string() const;

  friend bool operator==(const PolarizationType& a, const PolarizationType& b) { return a.d == b.d; }
};

PolarizationType make_type(std::initializer_list<long> d);

/// J_E = [[0, E], [-E, 0]].
IntMatrix polarization_form(const PolarizationType& e);

/// Period matrix (E Z) with validated Riemann matrix Z.
struct PolarizedAV {
  PolarizationType type;
  CMatrix z;
  std::string label;
  /// Scalar divided out of the input period matrix by build_period (1 when none).
  Integer content = 1;
  Precision precision = kDefaultPrecision;

  size_t g() const { return type.g(); }
  CMatrix period() const;
  IntMatrix j() const { return polarization_form(type); }
  bool exact() const { return is_exact(z); }
};

struct BuildOptions {
  std::string label;
  Precision precision = kDefaultPrecision;
  /// Divide out gcd(d_1, ..., d_g) from the whole period matrix.
  bool normalize_content = true;
};

/// Validates Z = Z^t and Im Z > 0; normalizes the content of (E Z) when requested.
PolarizedAV build_period(const PolarizationType& e, const CMatrix& z, const BuildOptions& opts = {});

/// Leading principal minors of Im Z at the given precision, in increasing size.
std::vector<Real> imaginary_minors(const CMatrix& z, Precision prec);
/// Symmetry plus positive definiteness of the imaginary part, without throwing.
bool in_siegel_space(const CMatrix& z, Precision prec);

/// C with C * Pi_src = Pi_dst * M; M has size 2 g_dst x 2 g_src. Throws NoSolution.
CMatrix analytic_from_rational(const PolarizedAV& src, const PolarizedAV& dst, const RatMatrix& m);

/// max |C Pi_src - Pi_dst M|; exactly zero when the identity holds in field mode.
Real hurwitz_residual(const CMatrix& c, const CMatrix& pi_src, const CMatrix& pi_dst, const RatMatrix& m,
                      Precision prec = kDefaultPrecision);

/// |det M| for an integral square matrix; NonIntegral otherwise.
Integer isogeny_degree(const RatMatrix& m);
Integer isogeny_degree(const IntMatrix& m);

/// M^t J_src M == J_expected.
bool check_polarization_pullback(const IntMatrix& m, const IntMatrix& j_src, const IntMatrix& j_expected);

}  // namespace abvar::pav
