#pragma once

#include "abvar/numerics/bigfloat.hpp"
#include "abvar/numerics/number_field.hpp"

#include <optional>
#include <variant>

namespace abvar {

/// A matrix entry: an exact number-field element, or a big-float complex once exactness is lost.
/// Mixing fields without a supported common field degrades both operands to big-float.
class ExactComplex {
 public:
  ExactComplex() : value_(NumberFieldElement()) {}
  ExactComplex(long q) : value_(NumberFieldElement(q)) {}              // NOLINT
  ExactComplex(const Rational& q) : value_(NumberFieldElement(q)) {}   // NOLINT
  ExactComplex(NumberFieldElement x, Precision prec = kDefaultPrecision)  // NOLINT
      : precision_(prec), value_(std::move(x)) {}
  explicit ExactComplex(Complex z) : precision_(z.precision()), value_(std::move(z)) {}

  bool is_exact() const { return std::holds_alternative<NumberFieldElement>(value_); }
  const NumberFieldElement& exact() const { return std::get<NumberFieldElement>(value_); }
  const Complex& approx() const { return std::get<Complex>(value_); }

  /// Working precision used when this value has to be evaluated.
  Precision precision() const { return precision_; }
  ExactComplex with_precision(Precision prec) const;

  bool is_zero() const;
  bool is_rational() const { return is_exact() && exact().is_rational(); }

  ExactComplex operator-() const;
  ExactComplex& operator+=(const ExactComplex& o) { return *this = *this + o; }
  ExactComplex& operator-=(const ExactComplex& o) { return *this = *this - o; }
  ExactComplex& operator*=(const ExactComplex& o) { return *this = *this * o; }

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b);
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b);
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b);
  friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b);

  /// Exact equality for exact operands; bitwise equality of the floats otherwise.
  friend bool operator==(const ExactComplex& a, const ExactComplex& b);

 private:
  Precision precision_ = kDefaultPrecision;
  std::variant<NumberFieldElement, Complex> value_;
};

/// Numeric value; precision must be at least 64 bits.
Complex eval_numeric(const ExactComplex& x, Precision prec);
Complex eval_numeric(const ExactComplex& x);

/// Recovers an algebraic number of degree <= max_degree from a numeric approximation by
/// integer-relation detection on its powers. Never guesses: returns nullopt when no relation
/// verifies to 2^(-precision/2).
std::optional<NumberFieldElement> recognize_algebraic(const Complex& z, int max_degree, Precision precision);

/// Minimal polynomial (primitive, positive leading coefficient) found for z, if any.
std::optional<std::vector<Integer>> find_minimal_polynomial(const Complex& z, int max_degree, Precision precision);

std::string to_string(const ExactComplex& x);

}  // namespace abvar
