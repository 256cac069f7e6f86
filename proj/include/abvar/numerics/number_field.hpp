#pragma once

#include "abvar/numerics/bigfloat.hpp"
#include "abvar/numerics/polynomial.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace abvar {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

/// Q(theta) for a monic squarefree integer polynomial, with theta pinned to one complex root.
class NumberField {
 public:
  /// Validates the polynomial and resolves the embedding. The approximation selects the
  /// nearest root; it must lie closer to that root than half the root separation.
  static FieldPtr create(const Polynomial& poly, const Complex& approx);
  static FieldPtr create(const Polynomial& poly, const std::string& approx);
  /// Q(sqrt(r)) embedded with sqrt(r) > 0 for r > 0 and Im > 0 for r < 0.
  static FieldPtr quadratic(long radicand);

  const Polynomial& poly() const { return poly_; }
  int degree() const { return poly_.degree(); }
  /// Root at default precision, as a decimal string suitable for serialization.
  std::string root_text() const;
  /// The pinned root, refined to the requested precision.
  Complex root(Precision prec) const;

  /// r when the defining polynomial is x^2 - r.
  std::optional<Rational> quadratic_radicand() const;
  /// True for x^2 - r with 0 < |r| <= 50: the fields that take part in composita.
  bool whitelisted_quadratic() const;

  /// (r1, r2) when this field was built as Q(sqrt(r1) + sqrt(r2)).
  const std::optional<std::pair<Rational, Rational>>& biquadratic() const { return biquadratic_; }

  /// Same defining polynomial and same embedding.
  bool same_as(const NumberField& other) const;

  /// Q(sqrt(r1), sqrt(r2)) for two whitelisted quadratic fields generating distinct fields.
  static FieldPtr compositum(const NumberField& a, const NumberField& b);

 private:
  NumberField(Polynomial poly, Complex root);

  Polynomial poly_;
  Complex root_;
  std::optional<std::pair<Rational, Rational>> biquadratic_;
};

/// Element of Q (null field) or of a NumberField, in the power basis of its generator.
class NumberFieldElement {
 public:
  NumberFieldElement() : coeffs_{Rational(0)} {}
  NumberFieldElement(const Rational& q) : coeffs_{q} {}  // NOLINT: rationals embed everywhere
  NumberFieldElement(long q) : coeffs_{Rational(q)} {}   // NOLINT
  NumberFieldElement(FieldPtr field, std::vector<Rational> coeffs);
  static NumberFieldElement generator(const FieldPtr& field);

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_rational() const;
  Rational rational_value() const;
  bool is_zero() const;

  Complex evaluate(Precision prec) const;

  /// Same element with the field dropped when the value is rational.
  NumberFieldElement simplified() const;

  NumberFieldElement operator-() const;
  NumberFieldElement inverse() const;

  // Operands must share a field (or one must be rational); FieldMismatch otherwise.
  friend NumberFieldElement operator+(const NumberFieldElement& a, const NumberFieldElement& b);
  friend NumberFieldElement operator-(const NumberFieldElement& a, const NumberFieldElement& b);
  friend NumberFieldElement operator*(const NumberFieldElement& a, const NumberFieldElement& b);
  friend NumberFieldElement operator/(const NumberFieldElement& a, const NumberFieldElement& b);
  friend bool operator==(const NumberFieldElement& a, const NumberFieldElement& b);

 private:
  FieldPtr field_;
  std::vector<Rational> coeffs_;
};

bool compatible_fields(const NumberFieldElement& a, const NumberFieldElement& b);

/// Re-expresses x inside target when target contains the field of x (rationals, equal
/// fields, quadratic subfields related by a rational square factor, biquadratic components).
std::optional<NumberFieldElement> embed_into(const NumberFieldElement& x, const FieldPtr& target);

/// Brings two elements into a common field: shared field, containment, or the whitelisted
/// biquadratic compositum. nullopt when none applies.
std::optional<std::pair<NumberFieldElement, NumberFieldElement>> unify_fields(
    const NumberFieldElement& a, const NumberFieldElement& b);

/// a + b sqrt(radicand) in the cached quadratic field.
NumberFieldElement quadratic_element(const Rational& a, const Rational& b, long radicand);

std::string to_string(const NumberFieldElement& x);

}  // namespace abvar
