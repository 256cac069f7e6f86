#include "abvar/pav/pav.hpp"

#include <sstream>

namespace abvar::pav {

bool PolarizationType::canonical() const {
  for (size_t i = 0; i + 1 < d.size(); ++i)
    if (d[i + 1] % d[i] != 0) return false;
  return true;
}

bool PolarizationType::principal() const {
  for (const auto& x : d)
    if (x != 1) return false;
  return true;
}

Integer PolarizationType::content() const {
  Integer c = 0;
  for (const auto& x : d) mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), x.get_mpz_t());
  return c;
}

std::string PolarizationType::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i].get_str();
  os << ")";
  return os.str();
}

PolarizationType make_type(std::initializer_list<long> d) {
  PolarizationType t;
  for (long x : d) t.d.emplace_back(x);
  return t;
}

IntMatrix polarization_form(const PolarizationType& e) { return latalg::alternating_standard(e.d); }

CMatrix PolarizedAV::period() const {
  size_t n = g();
  CMatrix p(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    p(i, i) = ExactComplex(Rational(type.d[i]));
    for (size_t j = 0; j < n; ++j) p(i, n + j) = z(i, j);
  }
  return p;
}

namespace {

// Determinant of a real matrix by partial-pivot elimination.
Real real_det(std::vector<std::vector<Real>> a, Precision prec) {
  size_t n = a.size();
  Real det(1L, prec);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    for (size_t i = c + 1; i < n; ++i)
      if (abs(a[i][c]) > abs(a[p][c])) p = i;
    if (a[p][c].is_zero()) return Real(0L, prec);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      Real f = a[i][c] / a[c][c];
      for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

bool symmetric_entries(const ExactComplex& a, const ExactComplex& b, Precision prec) {
  if (a.is_exact() && b.is_exact()) return a == b;
  Complex x = eval_numeric(a, prec), y = eval_numeric(b, prec);
  Real bound = pow2(-prec + 16, prec) * max(Real(1L, prec), abs(x));
  return abs(x - y) <= bound;
}

void check_symmetric(const CMatrix& z, Precision prec) {
  for (size_t i = 0; i < z.rows(); ++i)
    for (size_t j = i + 1; j < z.cols(); ++j)
      if (!symmetric_entries(z(i, j), z(j, i), prec))
        throw Error(ErrorKind::NotSymmetric, "Riemann matrix entry (" + std::to_string(i + 1) + "," +
                                                 std::to_string(j + 1) + ") differs from its transpose");
}

}  // namespace

std::vector<Real> imaginary_minors(const CMatrix& z, Precision prec) {
  // exact entries are evaluated with generous guard bits so the minors are reliable
  Precision work = is_exact(z) ? prec + 64 : prec;
  auto im = imag_part(z, work);
  std::vector<Real> minors;
  for (size_t k = 1; k <= z.rows(); ++k) {
    std::vector<std::vector<Real>> lead(k);
    for (size_t i = 0; i < k; ++i) lead[i].assign(im[i].begin(), im[i].begin() + static_cast<long>(k));
    minors.push_back(real_det(lead, work));
  }
  return minors;
}

bool in_siegel_space(const CMatrix& z, Precision prec) {
  if (!z.is_square()) return false;
  try {
    check_symmetric(z, prec);
  } catch (const Error&) {
    return false;
  }
  Real threshold = Real(10L, prec) * pow2(-prec / 2, prec);
  for (const auto& m : imaginary_minors(z, prec))
    if (!(m > threshold)) return false;
  return true;
}

PolarizedAV build_period(const PolarizationType& e, const CMatrix& z, const BuildOptions& opts) {
  size_t g = e.g();
  if (g == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (z.rows() != g || z.cols() != g)
    throw Error(ErrorKind::InvalidArgument, "Riemann matrix must be " + std::to_string(g) + "x" + std::to_string(g));
  for (const auto& d : e.d)
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "polarization type entries must be positive");
  if (opts.precision < 64) throw Error(ErrorKind::InvalidArgument, "precision below 64 bits");

  PolarizedAV a;
  a.type = e;
  a.z = z;
  a.label = opts.label;
  a.precision = opts.precision;
  check_symmetric(a.z, a.precision);

  Integer c = e.content();
  if (opts.normalize_content && c > 1) {
    ExactComplex inv(make_rational(1, c));
    for (auto& d : a.type.d) d /= c;
    a.z = a.z.map([&](const ExactComplex& x) { return x * inv; });
    a.content = c;
  }

  Real threshold = Real(10L, a.precision) * pow2(-a.precision / 2, a.precision);
  auto minors = imaginary_minors(a.z, a.precision);
  for (size_t k = 0; k < minors.size(); ++k)
    if (!(minors[k] > threshold))
      throw Error(ErrorKind::NotPositiveDefinite,
                  "leading minor " + std::to_string(k + 1) + " of Im Z is " + minors[k].to_string(6));
  return a;
}

CMatrix analytic_from_rational(const PolarizedAV& src, const PolarizedAV& dst, const RatMatrix& m) {
  size_t g = src.g(), h = dst.g();
  if (m.rows() != 2 * h || m.cols() != 2 * g)
    throw Error(ErrorKind::InvalidArgument, "rational representation has shape " + m.shape() + ", expected " +
                                                std::to_string(2 * h) + "x" + std::to_string(2 * g));
  CMatrix rhs = dst.period() * to_complex(m);
  CMatrix c(h, g);
  for (size_t i = 0; i < h; ++i)
    for (size_t j = 0; j < g; ++j) c(i, j) = rhs(i, j) * ExactComplex(make_rational(1, src.type.d[j]));
  CMatrix lhs = c * src.z;
  CMatrix target = rhs.block(0, g, h, g);
  CMatrix diff = lhs - target;
  Precision prec = std::min(src.precision, dst.precision);
  bool ok;
  if (is_exact(diff)) {
    ok = diff.is_zero();
  } else {
    Real scale = max(max_norm(target, prec), Real(1L, prec));
    ok = max_norm(diff, prec) <= float_tolerance(prec) * scale;
  }
  if (!ok) throw Error(ErrorKind::NoSolution, "rational representation is not complex-linear for these periods");
  return c;
}

Real hurwitz_residual(const CMatrix& c, const CMatrix& pi_src, const CMatrix& pi_dst, const RatMatrix& m,
                      Precision prec) {
  CMatrix diff = c * pi_src - pi_dst * to_complex(m);
  if (is_exact(diff) && diff.is_zero()) return Real(0L, prec);
  return max_norm(diff, prec);
}

Integer isogeny_degree(const RatMatrix& m) { return isogeny_degree(latalg::to_integer(m)); }

Integer isogeny_degree(const IntMatrix& m) { return abs(latalg::determinant(m)); }

bool check_polarization_pullback(const IntMatrix& m, const IntMatrix& j_src, const IntMatrix& j_expected) {
  if (m.rows() != j_src.rows() || m.cols() != j_expected.rows()) return false;
  return m.transpose() * j_src * m == j_expected;
}

}  // namespace abvar::pav
