#pragma once

#include "abvar/numerics/bigfloat.hpp"
#include "abvar/numerics/rational.hpp"

#include <vector>

namespace abvar {

/// Dense univariate polynomial over Q, coefficients stored low degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial monomial(const Rational& c, int degree);
  static Polynomial from_integers(const std::vector<long>& coeffs);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int k) const;
  const Rational& leading() const { return coeffs_.back(); }

  bool is_monic() const { return !is_zero() && leading() == 1; }
  bool has_integer_coeffs() const;
  Polynomial monic() const;
  /// Integer primitive multiple with positive leading coefficient.
  std::vector<Integer> primitive_integer() const;
  Polynomial derivative() const;

  Rational evaluate(const Rational& x) const;
  Complex evaluate(const Complex& x) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division; throws on a zero divisor.
  void divmod(const Polynomial& divisor, Polynomial& quotient, Polynomial& remainder) const;
  Polynomial operator%(const Polynomial& divisor) const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Monic gcd (zero if both are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);
/// s with s*a = 1 (mod modulus); throws when a and modulus are not coprime.
Polynomial inverse_mod(const Polynomial& a, const Polynomial& modulus);
bool is_squarefree(const Polynomial& p);

/// All complex roots by simultaneous Aberth iteration at the given precision.
std::vector<Complex> complex_roots(const Polynomial& p, Precision prec);
/// Newton refinement of an approximate simple root.
Complex refine_root(const Polynomial& p, const Complex& start, Precision prec);

std::string to_string(const Polynomial& p, const char* var = "x");

}  // namespace abvar
