#include "abvar/pav/cmatrix.hpp"

#include <sstream>

namespace abvar {

CMatrix to_complex(const IntMatrix& m) {
  return m.map([](const Integer& x) { return ExactComplex(Rational(x)); });
}

CMatrix to_complex(const RatMatrix& m) {
  return m.map([](const Rational& x) { return ExactComplex(x); });
}

bool is_exact(const CMatrix& m) {
  for (const auto& x : m.data())
    if (!x.is_exact()) return false;
  return true;
}

Precision matrix_precision(const CMatrix& m) {
  Precision p = 0;
  for (const auto& x : m.data()) p = p == 0 ? x.precision() : std::min(p, x.precision());
  return p == 0 ? kDefaultPrecision : p;
}

CMatrix with_precision(const CMatrix& m, Precision prec) {
  return m.map([prec](const ExactComplex& x) { return x.with_precision(prec); });
}

std::optional<RatMatrix> rational_part(const CMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_rational()) return std::nullopt;
      r(i, j) = m(i, j).exact().rational_value();
    }
  return r;
}

Real max_norm(const CMatrix& m, Precision prec) {
  Real best(0L, prec);
  for (const auto& x : m.data()) {
    if (x.is_exact() && x.is_zero()) continue;
    best = max(best, abs(eval_numeric(x, prec)));
  }
  return best;
}

Real float_tolerance(Precision prec) { return pow2(-prec / 2, prec); }

CMatrix transpose(const CMatrix& m) { return m.transpose(); }

std::vector<std::vector<Real>> imag_part(const CMatrix& m, Precision prec) {
  std::vector<std::vector<Real>> out(m.rows());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out[i].push_back(eval_numeric(m(i, j), prec).im);
  return out;
}

namespace {

bool numerically_zero(const ExactComplex& x, const Real& threshold) {
  if (x.is_exact()) return x.is_zero();
  return abs(x.approx()) <= threshold;
}

}  // namespace

CMatrix solve_full_rank(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::InvalidArgument, "solve shape mismatch");
  size_t n = a.cols();
  bool exact = is_exact(a) && is_exact(b);
  Precision prec = std::min(matrix_precision(a), matrix_precision(b));
  CMatrix aug = hstack(a, b);
  if (!exact) aug = abvar::with_precision(aug, prec);
  Real scale = max_norm(a, prec);
  Real threshold = float_tolerance(prec) * max(scale, Real(1L, prec));

  for (size_t c = 0; c < n; ++c) {
    size_t p = aug.rows();
    if (exact) {
      for (size_t i = c; i < aug.rows(); ++i)
        if (!aug(i, c).is_zero()) {
          p = i;
          break;
        }
    } else {
      Real best(0L, prec);
      for (size_t i = c; i < aug.rows(); ++i) {
        Real v = abs(eval_numeric(aug(i, c), prec));
        if (v > best) best = v, p = i;
      }
      if (p != aug.rows() && best <= threshold) p = aug.rows();
    }
    if (p == aug.rows()) throw Error(ErrorKind::RankDeficiency, "coefficient matrix lacks full column rank");
    aug.swap_rows(c, p);
    ExactComplex inv = ExactComplex(1L) / aug(c, c);
    for (size_t j = c; j < aug.cols(); ++j) aug(c, j) = aug(c, j) * inv;
    for (size_t i = 0; i < aug.rows(); ++i) {
      if (i == c || aug(i, c).is_zero()) continue;
      ExactComplex f = aug(i, c);
      for (size_t j = c; j < aug.cols(); ++j) aug(i, j) -= f * aug(c, j);
    }
  }
  Real rhs_scale = max(max_norm(b, prec), Real(1L, prec));
  for (size_t i = n; i < aug.rows(); ++i)
    for (size_t j = n; j < aug.cols(); ++j)
      if (!numerically_zero(aug(i, j), float_tolerance(prec) * rhs_scale * max(scale, Real(1L, prec))))
        throw Error(ErrorKind::Inconsistent, "overdetermined system is inconsistent");
  return aug.block(0, n, n, b.cols());
}

std::string to_string(const CMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace abvar
