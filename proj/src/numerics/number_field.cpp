#include "abvar/numerics/number_field.hpp"

#include "abvar/error.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace abvar {

namespace {

// Bits used when comparing embeddings numerically; far beyond any root separation we meet.
constexpr Precision kCheckPrecision = 128;

Rational radicand_of(const NumberField& f) { return *f.quadratic_radicand(); }

bool same_sign_embedding(const Complex& a, const Complex& b) {
  // a and b are either equal or negatives of each other; decide which.
  Real d_same = norm(a - b);
  Real d_opp = norm(a + b);
  return d_same < d_opp;
}

}  // namespace

NumberField::NumberField(Polynomial poly, Complex root) : poly_(std::move(poly)), root_(std::move(root)) {}

FieldPtr NumberField::create(const Polynomial& poly, const Complex& approx) {
  if (poly.degree() < 1) throw Error(ErrorKind::InvalidArgument, "defining polynomial must have degree >= 1");
  if (poly.degree() > 8) throw Error(ErrorKind::SizeGate, "defining polynomial degree above 8");
  if (!poly.is_monic() || !poly.has_integer_coeffs())
    throw Error(ErrorKind::InvalidArgument, "defining polynomial must be monic with integer coefficients");
  if (!is_squarefree(poly)) throw Error(ErrorKind::InvalidArgument, "defining polynomial is not squarefree");

  std::vector<Complex> roots = complex_roots(poly, kDefaultPrecision);
  Complex a = approx.with_precision(kDefaultPrecision);
  size_t best = 0;
  for (size_t k = 1; k < roots.size(); ++k)
    if (norm(roots[k] - a) < norm(roots[best] - a)) best = k;
  Real dist = abs(roots[best] - a);
  for (size_t k = 0; k < roots.size(); ++k) {
    if (k == best) continue;
    Real sep = abs(roots[k] - roots[best]);
    if (!(dist * Real(2L, kDefaultPrecision) < sep))
      throw Error(ErrorKind::EmbeddingAmbiguous,
                  "approximation " + to_string(approx, 12) + " does not single out a root of " + to_string(poly));
  }
  FieldPtr out(new NumberField(poly, roots[best]));
  // x^2 - r with the standard root is the cached quadratic field
  if (auto r = out->quadratic_radicand(); r && is_integral(*r) && r->get_num().fits_slong_p() && *r != 0) {
    FieldPtr q = quadratic(r->get_num().get_si());
    if (q->same_as(*out)) return q;
  }
  return out;
}

FieldPtr NumberField::create(const Polynomial& poly, const std::string& approx) {
  return create(poly, parse_complex(approx, kDefaultPrecision));
}

FieldPtr NumberField::quadratic(long radicand) {
  if (radicand == 0) throw Error(ErrorKind::InvalidArgument, "zero radicand");
  static std::mutex mutex;
  static std::map<long, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(radicand);
  if (it != cache.end()) return it->second;
  Polynomial p({Rational(-radicand), Rational(0), Rational(1)});
  Real s = sqrt(Real(std::labs(radicand), kDefaultPrecision));
  Complex approx = radicand > 0 ? Complex(s, Real(0L, kDefaultPrecision)) : Complex(Real(0L, kDefaultPrecision), s);
  FieldPtr f(new NumberField(p, approx));
  cache.emplace(radicand, f);
  return f;
}

NumberFieldElement quadratic_element(const Rational& a, const Rational& b, long radicand) {
  return NumberFieldElement(NumberField::quadratic(radicand), {a, b}).simplified();
}

std::string NumberField::root_text() const { return to_string(root_, 40); }

Complex NumberField::root(Precision prec) const {
  if (prec <= root_.precision()) return root_.with_precision(prec);
  return refine_root(poly_, root_, prec);
}

std::optional<Rational> NumberField::quadratic_radicand() const {
  if (poly_.degree() != 2 || poly_.coeff(1) != 0) return std::nullopt;
  return -poly_.coeff(0);
}

bool NumberField::whitelisted_quadratic() const {
  auto r = quadratic_radicand();
  return r && *r != 0 && abs(*r) <= 50;
}

bool NumberField::same_as(const NumberField& other) const {
  if (this == &other) return true;
  if (!(poly_ == other.poly_)) return false;
  Complex a = root_.with_precision(kCheckPrecision), b = other.root_.with_precision(kCheckPrecision);
  return abs(a - b) < pow2(-100, kCheckPrecision);
}

FieldPtr NumberField::compositum(const NumberField& a, const NumberField& b) {
  Rational r1 = radicand_of(a), r2 = radicand_of(b);
  Rational two_sum = 2 * (r1 + r2);
  Rational diff2 = (r1 - r2) * (r1 - r2);
  Polynomial p({diff2, Rational(0), -two_sum, Rational(0), Rational(1)});
  auto field = std::shared_ptr<NumberField>(new NumberField(p, a.root_ + b.root_));
  field->biquadratic_ = std::make_pair(r1, r2);
  return field;
}

NumberFieldElement::NumberFieldElement(FieldPtr field, std::vector<Rational> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  size_t n = field_ ? static_cast<size_t>(field_->degree()) : 1;
  if (coeffs_.size() > n) {
    // reduce modulo the defining polynomial
    Polynomial r = Polynomial(coeffs_) % field_->poly();
    coeffs_ = r.coeffs();
  }
  coeffs_.resize(n);
}

NumberFieldElement NumberFieldElement::generator(const FieldPtr& field) {
  std::vector<Rational> c(static_cast<size_t>(field->degree()));
  if (c.size() == 1) {
    c[0] = -field->poly().coeff(0);
  } else {
    c[1] = 1;
  }
  return NumberFieldElement(field, std::move(c));
}

bool NumberFieldElement::is_rational() const {
  for (size_t k = 1; k < coeffs_.size(); ++k)
    if (coeffs_[k] != 0) return false;
  return true;
}

Rational NumberFieldElement::rational_value() const {
  if (!is_rational()) throw Error(ErrorKind::InvalidArgument, "element is not rational");
  return coeffs_[0];
}

bool NumberFieldElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

Complex NumberFieldElement::evaluate(Precision prec) const {
  Precision work = prec + 16;
  if (!field_ || is_rational()) return Complex(coeffs_[0], prec);
  Complex theta = field_->root(work);
  Complex acc(work);
  for (size_t k = coeffs_.size(); k-- > 0;) {
    acc *= theta;
    acc.re += Real(coeffs_[k], work);
  }
  return acc.with_precision(prec);
}

NumberFieldElement NumberFieldElement::simplified() const {
  if (field_ && is_rational()) return NumberFieldElement(coeffs_[0]);
  return *this;
}

NumberFieldElement NumberFieldElement::operator-() const {
  NumberFieldElement r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

NumberFieldElement NumberFieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  if (!field_ || is_rational()) return NumberFieldElement(field_, {Rational(1) / coeffs_[0]});
  Polynomial inv = inverse_mod(Polynomial(coeffs_), field_->poly());
  return NumberFieldElement(field_, inv.coeffs());
}

bool compatible_fields(const NumberFieldElement& a, const NumberFieldElement& b) {
  if (!a.field() || !b.field()) return true;
  return a.field()->same_as(*b.field());
}

namespace {

// Lifts a pair onto one shared representation or throws FieldMismatch.
std::pair<NumberFieldElement, NumberFieldElement> lift(const NumberFieldElement& a, const NumberFieldElement& b) {
  if (!a.field() && !b.field()) return {a, b};
  if (!a.field() && b.field()) return {NumberFieldElement(b.field(), {a.coeffs()[0]}), b};
  if (a.field() && !b.field()) return {a, NumberFieldElement(a.field(), {b.coeffs()[0]})};
  if (a.field()->same_as(*b.field())) return {a, NumberFieldElement(a.field(), b.coeffs())};
  if (a.is_rational()) return {NumberFieldElement(b.field(), {a.coeffs()[0]}), b};
  if (b.is_rational()) return {a, NumberFieldElement(a.field(), {b.coeffs()[0]})};
  throw Error(ErrorKind::FieldMismatch, "operands live in different number fields");
}

}  // namespace

NumberFieldElement operator+(const NumberFieldElement& a, const NumberFieldElement& b) {
  auto [x, y] = lift(a, b);
  std::vector<Rational> c(x.coeffs());
  for (size_t k = 0; k < c.size(); ++k) c[k] += y.coeffs()[k];
  return NumberFieldElement(x.field(), std::move(c));
}

NumberFieldElement operator-(const NumberFieldElement& a, const NumberFieldElement& b) { return a + (-b); }

NumberFieldElement operator*(const NumberFieldElement& a, const NumberFieldElement& b) {
  auto [x, y] = lift(a, b);
  if (!x.field()) return NumberFieldElement(x.coeffs()[0] * y.coeffs()[0]);
  Polynomial prod = Polynomial(x.coeffs()) * Polynomial(y.coeffs());
  return NumberFieldElement(x.field(), (prod % x.field()->poly()).coeffs());
}

NumberFieldElement operator/(const NumberFieldElement& a, const NumberFieldElement& b) {
  auto [x, y] = lift(a, b);
  return x * y.inverse();
}

bool operator==(const NumberFieldElement& a, const NumberFieldElement& b) {
  if (a.is_rational() && b.is_rational()) return a.coeffs()[0] == b.coeffs()[0];
  if (auto u = unify_fields(a, b)) return u->first.coeffs() == u->second.coeffs();
  // unrelated fields: decide numerically far beyond any representable difference
  return abs(a.evaluate(512) - b.evaluate(512)) < pow2(-480, 512);
}

namespace {

// theta_1 = (t^3 - (3 r1 + r2) t) / (2 (r2 - r1)) with t = sqrt(r1) + sqrt(r2)
NumberFieldElement first_component(const FieldPtr& big) {
  auto [r1, r2] = *big->biquadratic();
  Rational scale = Rational(1) / (2 * (r2 - r1));
  std::vector<Rational> c(4);
  c[1] = -(3 * r1 + r2) * scale;
  c[3] = scale;
  return NumberFieldElement(big, std::move(c));
}

std::optional<NumberFieldElement> scaled_image(const NumberFieldElement& x, const Rational& r,
                                               const NumberFieldElement& target_root_of, const Rational& s,
                                               const FieldPtr& target) {
  // x lives in Q(sqrt r); target_root_of is an element of target squaring to s.
  Rational q;
  if (!rational_sqrt(r / s, q)) return std::nullopt;
  NumberFieldElement image = NumberFieldElement(q) * target_root_of;
  Complex want = x.field()->root(kCheckPrecision);
  Complex got = image.evaluate(kCheckPrecision);
  if (!same_sign_embedding(want, got)) image = -image;
  (void)target;
  return NumberFieldElement(x.coeffs()[0]) + NumberFieldElement(x.coeffs()[1]) * image;
}

}  // namespace

std::optional<NumberFieldElement> embed_into(const NumberFieldElement& x, const FieldPtr& target) {
  if (!target) {
    if (x.is_rational()) return NumberFieldElement(x.coeffs()[0]);
    return std::nullopt;
  }
  if (x.is_rational()) return NumberFieldElement(target, {x.coeffs()[0]});
  if (x.field()->same_as(*target)) return NumberFieldElement(target, x.coeffs());
  auto r = x.field()->quadratic_radicand();
  if (!r) return std::nullopt;
  if (auto s = target->quadratic_radicand()) {
    return scaled_image(x, *r, NumberFieldElement::generator(target), *s, target);
  }
  if (target->biquadratic()) {
    auto [r1, r2] = *target->biquadratic();
    NumberFieldElement t1 = first_component(target);
    NumberFieldElement t2 = NumberFieldElement::generator(target) - t1;
    if (auto e = scaled_image(x, *r, t1, r1, target)) return e;
    if (auto e = scaled_image(x, *r, t2, r2, target)) return e;
    if (auto e = scaled_image(x, *r, t1 * t2, r1 * r2, target)) return e;
  }
  return std::nullopt;
}

std::optional<std::pair<NumberFieldElement, NumberFieldElement>> unify_fields(const NumberFieldElement& a,
                                                                              const NumberFieldElement& b) {
  if (compatible_fields(a, b)) {
    if (!a.field()) return std::make_pair(b.field() ? *embed_into(a, b.field()) : a, b);
    return std::make_pair(a, *embed_into(b, a.field()));
  }
  if (a.is_rational()) return std::make_pair(*embed_into(a, b.field()), b);
  if (b.is_rational()) return std::make_pair(a, *embed_into(b, a.field()));
  if (auto e = embed_into(b, a.field())) return std::make_pair(a, *e);
  if (auto e = embed_into(a, b.field())) return std::make_pair(*e, b);
  if (a.field()->whitelisted_quadratic() && b.field()->whitelisted_quadratic()) {
    FieldPtr big = NumberField::compositum(*a.field(), *b.field());
    auto ea = embed_into(a, big);
    auto eb = embed_into(b, big);
    if (ea && eb) return std::make_pair(*ea, *eb);
  }
  return std::nullopt;
}

std::string to_string(const NumberFieldElement& x) {
  if (!x.field() || x.is_rational()) return to_string(x.coeffs()[0]);
  std::ostringstream os;
  std::string gen;
  if (auto r = x.field()->quadratic_radicand()) {
    gen = "sqrt(" + to_string(*r) + ")";
  } else {
    gen = "a";
  }
  bool first = true;
  for (size_t k = 0; k < x.coeffs().size(); ++k) {
    const Rational& c = x.coeffs()[k];
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Rational m = abs(c);
    if (k == 0) os << to_string(m);
    else {
      if (m != 1) os << to_string(m) << "*";
      os << gen;
      if (k >= 2) os << "^" << k;
    }
    first = false;
  }
  if (!x.field()->quadratic_radicand())
    os << " [a: " << to_string(x.field()->poly()) << " = 0, a ~ " << to_string(x.field()->root(64), 12) << "]";
  return os.str();
}

}  // namespace abvar
