#include "abvar/numerics/exact_complex.hpp"

#include "abvar/error.hpp"
#include "abvar/latalg/lll.hpp"

#include <sstream>

namespace abvar {

namespace {

Precision joint_precision(const ExactComplex& a, const ExactComplex& b) {
  return std::max(a.precision(), b.precision());
}

template <class ExactOp, class FloatOp>
ExactComplex combine(const ExactComplex& a, const ExactComplex& b, ExactOp exact_op, FloatOp float_op) {
  Precision prec = joint_precision(a, b);
  if (a.is_exact() && b.is_exact()) {
    if (auto u = unify_fields(a.exact(), b.exact()))
      return ExactComplex(exact_op(u->first, u->second).simplified(), prec);
  }
  return ExactComplex(float_op(eval_numeric(a, prec), eval_numeric(b, prec)));
}

}  // namespace

ExactComplex ExactComplex::with_precision(Precision prec) const {
  if (is_exact()) return ExactComplex(exact(), prec);
  return ExactComplex(approx().with_precision(prec));
}

bool ExactComplex::is_zero() const {
  if (is_exact()) return exact().is_zero();
  return approx().re.is_zero() && approx().im.is_zero();
}

ExactComplex ExactComplex::operator-() const {
  if (is_exact()) return ExactComplex(-exact(), precision_);
  return ExactComplex(-approx());
}

ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x + y; },
                 [](const Complex& x, const Complex& y) { return x + y; });
}

ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x - y; },
                 [](const Complex& x, const Complex& y) { return x - y; });
}

ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x * y; },
                 [](const Complex& x, const Complex& y) { return x * y; });
}

ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  return combine(a, b, [](const auto& x, const auto& y) { return x / y; },
                 [](const Complex& x, const Complex& y) { return x / y; });
}

bool operator==(const ExactComplex& a, const ExactComplex& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  if (a.is_exact() != b.is_exact()) return false;
  return a.approx().re == b.approx().re && a.approx().im == b.approx().im;
}

Complex eval_numeric(const ExactComplex& x, Precision prec) {
  if (prec < 64) throw Error(ErrorKind::InvalidArgument, "evaluation precision below 64 bits");
  if (x.is_exact()) return x.exact().evaluate(prec);
  return x.approx().with_precision(prec);
}

Complex eval_numeric(const ExactComplex& x) { return eval_numeric(x, std::max<Precision>(x.precision(), 64)); }

namespace {

Integer max_abs(const std::vector<Integer>& v) {
  Integer m = 0;
  for (const auto& c : v)
    if (abs(c) > m) m = abs(c);
  return m;
}

Complex eval_int_poly(const std::vector<Integer>& c, const Complex& z, Precision prec) {
  Complex acc(prec);
  for (size_t k = c.size(); k-- > 0;) {
    acc *= z;
    acc.re += Real(c[k], prec);
  }
  return acc;
}

// One relation search of exact degree n. Returns coefficients low to high.
std::optional<std::vector<Integer>> relation_of_degree(const Complex& z, int n, Precision precision) {
  Precision work = precision + 32;
  Complex zw = z.with_precision(work);
  bool real_input = abs(z.im) < pow2(-precision / 2, work);
  Real scale = pow2(precision - 8, work);

  std::vector<Complex> powers;
  powers.emplace_back(Rational(1), work);
  for (int k = 1; k <= n; ++k) powers.push_back(powers.back() * zw);

  size_t dim = static_cast<size_t>(n) + 1;
  latalg::IntRows rows(dim, std::vector<Integer>(dim + (real_input ? 1 : 2)));
  for (size_t k = 0; k < dim; ++k) {
    rows[k][k] = 1;
    rows[k][dim] = (powers[k].re * scale).round();
    if (!real_input) rows[k][dim + 1] = (powers[k].im * scale).round();
  }
  latalg::lll_reduce(rows);

  // Reject anything whose size is typical of a random lattice: a genuine relation is much shorter.
  long budget_bits = (precision - 8) * (real_input ? 1 : 2) / static_cast<long>(dim) - 20;
  if (budget_bits < 4) return std::nullopt;
  Integer budget = Integer(1) << static_cast<mp_bitcnt_t>(budget_bits);

  for (const auto& row : rows) {
    std::vector<Integer> c(row.begin(), row.begin() + static_cast<long>(dim));
    if (c.back() == 0) continue;
    Integer h = max_abs(c);
    if (h > budget) continue;
    Complex r = eval_int_poly(c, zw, work);
    Real zabs = max(abs(zw), Real(1L, work));
    Real bound = Real(h, work) * pow2(-precision / 2, work);
    for (int k = 0; k < n; ++k) bound *= zabs;
    if (!(abs(r) <= bound)) continue;
    Integer g = 0;
    for (const auto& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    for (auto& x : c) x /= g;
    if (c.back() < 0)
      for (auto& x : c) x = -x;
    return c;
  }
  return std::nullopt;
}

Polynomial to_poly(const std::vector<Integer>& c) {
  std::vector<Rational> q;
  for (const auto& x : c) q.emplace_back(x);
  return Polynomial(q);
}

}  // namespace

std::optional<std::vector<Integer>> find_minimal_polynomial(const Complex& z, int max_degree, Precision precision) {
  if (precision < 64) throw Error(ErrorKind::InvalidArgument, "recognition precision below 64 bits");
  for (int n = 1; n <= max_degree; ++n) {
    auto c = relation_of_degree(z, n, precision);
    if (!c) continue;
    Polynomial p = to_poly(*c);
    if (!is_squarefree(p)) continue;
    return c;
  }
  return std::nullopt;
}

std::optional<NumberFieldElement> recognize_algebraic(const Complex& z, int max_degree, Precision precision) {
  auto found = find_minimal_polynomial(z, max_degree, precision);
  if (!found) return std::nullopt;
  const auto& c = *found;
  int n = static_cast<int>(c.size()) - 1;
  std::optional<NumberFieldElement> result;
  if (n == 1) {
    result = NumberFieldElement(make_rational(-c[0], c[1]));
  } else if (n == 2) {
    // z = (-b +- f sqrt(D0)) / (2a)
    Integer a = c[2], b = c[1], cc = c[0];
    Integer disc = b * b - 4 * a * cc;
    Integer f, d0;
    squarefree_decompose(disc, f, d0);
    if (d0 == 1) return std::nullopt;
    if (!d0.fits_slong_p()) return std::nullopt;
    FieldPtr field = NumberField::quadratic(d0.get_si());
    Rational lin = make_rational(f, 2 * a);
    NumberFieldElement plus(field, {make_rational(-b, 2 * a), lin});
    NumberFieldElement minus(field, {make_rational(-b, 2 * a), -lin});
    Precision work = precision + 16;
    Complex zw = z.with_precision(work);
    result = norm(plus.evaluate(work) - zw) < norm(minus.evaluate(work) - zw) ? plus : minus;
  } else {
    // theta = c_n z is a root of the monic integer polynomial sum c_k c_n^(n-1-k) x^k
    Integer lead = c[static_cast<size_t>(n)];
    std::vector<Rational> monic(c.size());
    Integer pw = 1;
    for (int k = n; k-- > 0;) {
      monic[static_cast<size_t>(k)] = Rational(c[static_cast<size_t>(k)] * pw);
      pw *= lead;
    }
    monic[static_cast<size_t>(n)] = 1;
    Complex approx = z * Complex(Rational(lead), z.precision());
    FieldPtr field;
    try {
      field = NumberField::create(Polynomial(monic), approx);
    } catch (const Error&) {
      return std::nullopt;
    }
    std::vector<Rational> e(static_cast<size_t>(n));
    e[1] = Rational(1) / Rational(lead);
    result = NumberFieldElement(field, e);
  }
  Precision check = precision + 16;
  if (!(abs(result->evaluate(check) - z.with_precision(check)) <= pow2(-precision / 2, check))) return std::nullopt;
  return result;
}

std::string to_string(const ExactComplex& x) {
  if (x.is_exact()) return to_string(x.exact());
  return to_string(x.approx(), 20);
}

}  // namespace abvar
