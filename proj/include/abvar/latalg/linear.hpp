#pragma once

#include "abvar/latalg/matrix.hpp"

#include <optional>
#include <vector>

namespace abvar::latalg {

RatMatrix to_rational(const IntMatrix& m);
/// Throws NonIntegral when an entry has a denominator.
IntMatrix to_integer(const RatMatrix& m);
bool is_integral(const RatMatrix& m);
/// Smallest positive integer c with c*m integral.
Integer common_denominator(const RatMatrix& m);

/// Fraction-free (Bareiss) determinant.
Integer determinant(const IntMatrix& m);
Rational determinant(const RatMatrix& m);

struct RowEchelon {
  RatMatrix reduced;          // reduced row echelon form
  std::vector<size_t> pivots; // pivot column of each nonzero row
};
RowEchelon rref(const RatMatrix& m);
size_t rank(const RatMatrix& m);
size_t rank(const IntMatrix& m);

/// Basis (as columns) of the right null space over Q.
RatMatrix kernel(const RatMatrix& m);

struct SolveResult {
  bool consistent = false;
  RatMatrix x;                        // one solution when consistent
  std::vector<Rational> certificate;  // y with y*A = 0 and y*B != 0 when inconsistent
};
/// Solves A X = B exactly.
SolveResult solve_exact(const RatMatrix& a, const RatMatrix& b);
/// Throws Inconsistent when A X = B has no solution.
RatMatrix solve_or_throw(const RatMatrix& a, const RatMatrix& b);
/// Throws on singular input.
RatMatrix inverse(const RatMatrix& m);

struct HermiteResult {
  IntMatrix h;  // row Hermite normal form: echelon, positive pivots, reduced entries above pivots
  IntMatrix u;  // unimodular with u * m = h
  size_t rank = 0;
};
HermiteResult hermite_form(const IntMatrix& m);

/// Smith invariants d1 | d2 | ... (length min(rows, cols)), zeros trailing.
std::vector<Integer> elementary_divisors(const IntMatrix& m);

/// Z-basis (columns) of {x in Z^n : m x = 0}.
IntMatrix integer_kernel(const IntMatrix& m);

/// Z-basis (columns, in Hermite order) of span_Q(cols) intersected with Z^n.
/// `expected_rank` < 0 skips the rank check.
IntMatrix saturate(const RatMatrix& cols, long expected_rank = -1);

/// Canonical Hermite basis of the lattice spanned by the columns (zero columns dropped).
IntMatrix lattice_hermite_basis(const IntMatrix& cols);
/// True when every column of `inner` is an integer combination of the columns of `outer`.
bool lattice_contains(const IntMatrix& outer, const IntMatrix& inner);

struct SymplecticBasis {
  IntMatrix s;               // 2g x 2h, columns (e_1..e_h, f_1..f_h)
  std::vector<Integer> d;    // n_1 | n_2 | ... | n_h
  IntMatrix transform;       // unimodular 2h x 2h with s = basis * transform
};
/// Frobenius reduction of the alternating form J restricted to the basis columns.
SymplecticBasis frobenius_symplectic_basis(const IntMatrix& basis, const IntMatrix& j);

/// [[0, D], [-D, 0]] for D = diag(d).
IntMatrix alternating_standard(const std::vector<Integer>& d);
bool is_alternating(const IntMatrix& m);

}  // namespace abvar::latalg
