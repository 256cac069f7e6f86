#pragma once

#include "abvar/latalg/matrix.hpp"
#include "abvar/numerics/exact_complex.hpp"

namespace abvar {

using CMatrix = Matrix<ExactComplex>;

CMatrix to_complex(const IntMatrix& m);
CMatrix to_complex(const RatMatrix& m);

/// True when every entry is a number-field element (field mode).
bool is_exact(const CMatrix& m);
/// Lowest working precision among the entries.
Precision matrix_precision(const CMatrix& m);
CMatrix with_precision(const CMatrix& m, Precision prec);

/// The rational matrix when all entries are rational.
std::optional<RatMatrix> rational_part(const CMatrix& m);

/// max |m_ij| evaluated at the given precision.
Real max_norm(const CMatrix& m, Precision prec);

/// Solves A X = B for A with full column rank. Exact elimination in field mode; partial
/// pivoting in float mode, where a pivot below 2^(-prec/2) times the column scale counts as zero.
/// Throws RankDeficiency when A lacks full column rank, Inconsistent when the extra rows disagree.
CMatrix solve_full_rank(const CMatrix& a, const CMatrix& b);

/// Transposed copy (no conjugation).
CMatrix transpose(const CMatrix& m);

/// Matrix with the real or imaginary parts of the numeric values, as rationals-free reals.
std::vector<std::vector<Real>> imag_part(const CMatrix& m, Precision prec);

/// Tolerance used for float-mode identities: 2^(-prec/2).
Real float_tolerance(Precision prec);

std::string to_string(const CMatrix& m);

}  // namespace abvar
