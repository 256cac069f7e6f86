#include "abvar/numerics/bigfloat.hpp"

#include "abvar/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <vector>

namespace abvar {

Real::Real(Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(double value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(const Integer& value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const Rational& value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const std::string& decimal, Precision prec) {
  mpfr_init2(value_, prec);
  if (mpfr_set_str(value_, decimal.c_str(), 10, MPFR_RNDN) != 0)
    throw Error(ErrorKind::Parse, "bad decimal '" + decimal + "'");
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::with_precision(Precision prec) const {
  Real r(prec);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

Integer Real::round() const {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDN);
  return z;
}

long Real::exponent() const {
  if (mpfr_zero_p(value_)) return -(1L << 40);
  return mpfr_get_exp(value_) - 1;
}

std::string Real::to_string(int digits) const {
  if (digits <= 0) digits = static_cast<int>(std::ceil(precision() * 0.30103)) + 1;
  if (mpfr_zero_p(value_)) return "0";
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

void Real::grow_to(Precision prec) {
  if (prec > precision()) mpfr_prec_round(value_, prec, MPFR_RNDN);
}

Real& Real::operator+=(const Real& o) {
  grow_to(o.precision());
  mpfr_add(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  grow_to(o.precision());
  mpfr_sub(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  grow_to(o.precision());
  mpfr_mul(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  grow_to(o.precision());
  mpfr_div(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

Real abs(const Real& x) {
  Real r(x);
  mpfr_abs(r.get(), r.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow2(long exponent, Precision prec) {
  Real r(1L, prec);
  mpfr_mul_2si(r.get(), r.get(), exponent, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(20); }

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  Real den = norm(o);
  Real r = (re * o.re + im * o.im) / den;
  Real i = (im * o.re - re * o.im) / den;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real abs(const Complex& z) {
  Real r(z.precision());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  return r;
}

Complex sqrt(const Complex& z) {
  // principal branch: sqrt((|z|+re)/2) + i*sign(im)*sqrt((|z|-re)/2)
  Precision p = z.precision();
  Real m = abs(z);
  Real two(2L, p);
  Real a = sqrt((m + z.re) / two);
  Real b = sqrt(max((m - z.re) / two, Real(0L, p)));
  if (z.im.sign() < 0) b = -b;
  return {a, b};
}

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

Complex parse_complex(const std::string& text, Precision prec) {
  std::string s = strip_spaces(text);
  if (s.empty()) throw Error(ErrorKind::Parse, "empty complex literal");
  if (s.back() != 'i') return {Real(s, prec), Real(0L, prec)};
  s.pop_back();
  // split at the last sign that is not at the start and not part of an exponent
  size_t split = std::string::npos;
  for (size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "0" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  if (im_part[0] == '+') im_part.erase(0, 1);
  return {Real(re_part, prec), Real(im_part, prec)};
}

std::string to_string(const Complex& z, int digits) {
  std::string re = z.re.to_string(digits);
  std::string im = abs(z.im).to_string(digits);
  return re + (z.im.sign() < 0 ? "-" : "+") + im + "i";
}

std::ostream& operator<<(std::ostream& os, const Complex& z) { return os << to_string(z, 20); }

}  // namespace abvar
