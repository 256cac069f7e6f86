#include "abvar/numerics/polynomial.hpp"

#include "abvar/error.hpp"

#include <cmath>
#include <sstream>

namespace abvar {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(static_cast<size_t>(degree) + 1);
  v.back() = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_integers(const std::vector<long>& coeffs) {
  std::vector<Rational> v;
  v.reserve(coeffs.size());
  for (long c : coeffs) v.emplace_back(c);
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return Rational(0);
  return coeffs_[static_cast<size_t>(k)];
}

bool Polynomial::has_integer_coeffs() const {
  for (const auto& c : coeffs_)
    if (c.get_den() != 1) return false;
  return true;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  Rational lc = leading();
  std::vector<Rational> v(coeffs_);
  for (auto& c : v) c /= lc;
  return Polynomial(std::move(v));
}

std::vector<Integer> Polynomial::primitive_integer() const {
  Integer den = 1;
  for (const auto& c : coeffs_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<Integer> out;
  Integer content = 0;
  for (const auto& c : coeffs_) {
    Rational scaled = c * den;
    out.push_back(scaled.get_num());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), scaled.get_num().get_mpz_t());
  }
  if (content == 0) return out;
  if (out.back() < 0) content = -content;
  for (auto& c : out) c /= content;
  return out;
}

Polynomial Polynomial::derivative() const {
  std::vector<Rational> v;
  for (size_t k = 1; k < coeffs_.size(); ++k) v.push_back(coeffs_[k] * static_cast<long>(k));
  return Polynomial(std::move(v));
}

Rational Polynomial::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
  return acc;
}

Complex Polynomial::evaluate(const Complex& x) const {
  Precision p = x.precision();
  Complex acc(p);
  for (size_t k = coeffs_.size(); k-- > 0;) {
    acc *= x;
    acc.re += Real(coeffs_[k], p);
  }
  return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(v));
}

Polynomial operator*(const Rational& c, const Polynomial& a) {
  std::vector<Rational> v(a.coeffs_);
  for (auto& x : v) x *= c;
  return Polynomial(std::move(v));
}

void Polynomial::divmod(const Polynomial& divisor, Polynomial& quotient, Polynomial& remainder) const {
  if (divisor.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  std::vector<Rational> rem(coeffs_);
  int dd = divisor.degree();
  std::vector<Rational> quo(degree() >= dd ? static_cast<size_t>(degree() - dd + 1) : 0);
  const Rational& lc = divisor.leading();
  for (int k = degree(); k >= dd; --k) {
    Rational c = rem[static_cast<size_t>(k)] / lc;
    if (c == 0) continue;
    quo[static_cast<size_t>(k - dd)] = c;
    for (int j = 0; j <= dd; ++j) rem[static_cast<size_t>(k - dd + j)] -= c * divisor.coeffs_[static_cast<size_t>(j)];
  }
  quotient = Polynomial(std::move(quo));
  remainder = Polynomial(std::move(rem));
}

Polynomial Polynomial::operator%(const Polynomial& divisor) const {
  Polynomial q, r;
  divmod(divisor, q, r);
  return r;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a, y = b;
  while (!y.is_zero()) {
    Polynomial r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Polynomial inverse_mod(const Polynomial& a, const Polynomial& modulus) {
  // extended Euclid on (modulus, a): track s with s*a = r (mod modulus)
  Polynomial r0 = modulus, r1 = a % modulus;
  Polynomial s0, s1 = Polynomial({Rational(1)});
  while (!r1.is_zero()) {
    Polynomial q, r;
    r0.divmod(r1, q, r);
    Polynomial s = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (r0.degree() != 0) throw Error(ErrorKind::InvalidArgument, "element is not invertible modulo the defining polynomial");
  return (Rational(1) / r0.leading()) * s0 % modulus;
}

bool is_squarefree(const Polynomial& p) {
  if (p.degree() <= 1) return !p.is_zero();
  return gcd(p, p.derivative()).degree() == 0;
}

std::vector<Complex> complex_roots(const Polynomial& p, Precision prec) {
  int n = p.degree();
  if (n < 1) return {};
  Polynomial m = p.monic();
  Polynomial dm = m.derivative();
  Precision work = prec + 32;
  // initial guesses on a circle of Cauchy-bound radius, slightly rotated
  double bound = 1.0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, 1.0 + std::fabs(m.coeff(k).get_d()));
  std::vector<Complex> z;
  for (int k = 0; k < n; ++k) {
    double ang = 2.0 * M_PI * k / n + 0.4;
    z.emplace_back(Real(0.5 * bound * std::cos(ang), work), Real(0.5 * bound * std::sin(ang), work));
  }
  Real tol = pow2(-work + 8, work);
  for (int iter = 0; iter < 2000; ++iter) {
    Real max_step(0L, work);
    for (int i = 0; i < n; ++i) {
      Complex ratio = m.evaluate(z[static_cast<size_t>(i)]) / dm.evaluate(z[static_cast<size_t>(i)]);
      Complex sum(work);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        Complex one(Rational(1), work);
        sum += one / (z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)]);
      }
      Complex one(Rational(1), work);
      Complex step = ratio / (one - ratio * sum);
      z[static_cast<size_t>(i)] -= step;
      Real s = abs(step);
      if (s > max_step) max_step = s;
    }
    if (max_step < tol) break;
  }
  for (auto& r : z) r = refine_root(m, r, prec);
  return z;
}

Complex refine_root(const Polynomial& p, const Complex& start, Precision prec) {
  Precision work = prec + 32;
  Polynomial dp = p.derivative();
  Complex z = start.with_precision(work);
  Real tol = pow2(-work + 4, work);
  for (int iter = 0; iter < 200; ++iter) {
    Complex step = p.evaluate(z) / dp.evaluate(z);
    z -= step;
    if (abs(step) <= tol * max(Real(1L, work), abs(z))) break;
  }
  return z.with_precision(prec);
}

std::string to_string(const Polynomial& p, const char* var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    Rational c = p.coeff(k);
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Rational a = abs(c);
    if (a != 1 || k == 0) os << to_string(a);
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

}  // namespace abvar
