#pragma once

#include "abvar/numerics/rational.hpp"

#include <mpfr.h>

#include <algorithm>
#include <iosfwd>
#include <string>
#include <utility>

namespace abvar {

using Precision = long;

/// Working precision in bits; every tolerance in the library assumes it unless told otherwise.
inline constexpr Precision kDefaultPrecision = 256;

/// Owning MPFR real. Binary operations round to the larger operand precision.
class Real {
 public:
  explicit Real(Precision prec = kDefaultPrecision);
  Real(long value, Precision prec);
  Real(double value, Precision prec);
  Real(const Integer& value, Precision prec);
  Real(const Rational& value, Precision prec);
  Real(const std::string& decimal, Precision prec);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  Precision precision() const { return mpfr_get_prec(value_); }
  /// Copy rounded (or zero-extended) to a new precision.
  Real with_precision(Precision prec) const;

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Nearest integer.
  Integer round() const;
  /// log2 |x| rounded down; a very negative value for zero.
  long exponent() const;
  /// Scientific decimal with the given number of significant digits.
  std::string to_string(int digits = 0) const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real operator-() const;

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return b < a; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return b <= a; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

 private:
  void grow_to(Precision prec);
  mpfr_t value_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
/// 2^exponent at the given precision.
Real pow2(long exponent, Precision prec);
Real max(const Real& a, const Real& b);

std::ostream& operator<<(std::ostream& os, const Real& x);

/// Complex number over two MPFR reals.
struct Complex {
  Real re;
  Real im;

  explicit Complex(Precision prec = kDefaultPrecision) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(const Rational& r, Precision prec) : re(r, prec), im(0L, prec) {}

  Precision precision() const { return std::max(re.precision(), im.precision()); }
  Complex with_precision(Precision prec) const { return {re.with_precision(prec), im.with_precision(prec)}; }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex operator-() const { return {-re, -im}; }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
};

Complex conj(const Complex& z);
/// |z|^2
Real norm(const Complex& z);
Real abs(const Complex& z);
Complex sqrt(const Complex& z);

/// Parses "a+bi", "a-bi", "bi", "a" decimal forms (used for embedding approximations).
Complex parse_complex(const std::string& text, Precision prec);
std::string to_string(const Complex& z, int digits = 0);

std::ostream& operator<<(std::ostream& os, const Complex& z);

}  // namespace abvar
