#include "abvar/decompose/decompose.hpp"

namespace abvar::decompose {

namespace {

using Mat2 = std::array<Integer, 4>;

Mat2 compose(const Mat2& op, const Mat2& m) {
  return {op[0] * m[0] + op[1] * m[2], op[0] * m[1] + op[1] * m[3], op[2] * m[0] + op[3] * m[2],
          op[2] * m[1] + op[3] * m[3]};
}

Mat2 translation(const Integer& n) { return {1, -n, 0, 1}; }
const Mat2 kInvert{0, -1, 1, 0};

Integer ceil_rational(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Integer floor_real(const Real& x) {
  Integer f = x.round();
  if (Real(f, x.precision()) > x) f -= 1;
  return f;
}

std::vector<Integer> primitive(const std::vector<Rational>& c) {
  Integer l = 1;
  for (const auto& q : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> out;
  Integer g = 0;
  for (const auto& q : c) {
    Rational s = q * Rational(l);
    out.push_back(s.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  for (auto& x : out) x /= g;
  if (out.back() < 0)
    for (auto& x : out) x = -x;
  return out;
}

void fill_cm(EllipticReport& rep, const std::vector<Integer>& poly) {
  rep.min_poly = poly;
  if (poly.size() == 3) {
    rep.cm = true;
    rep.discriminant = poly[1] * poly[1] - 4 * poly[2] * poly[0];
  }
}

}  // namespace

EllipticReport elliptic_normalize(const Integer& d, const ExactComplex& w, Precision prec) {
  if (d <= 0) throw Error(ErrorKind::InvalidArgument, "elliptic period needs a positive first entry");
  ExactComplex tau = w / ExactComplex(Rational(d));
  Complex tv = eval_numeric(tau, prec);
  if (tv.im.sign() <= 0) throw Error(ErrorKind::NotInSiegel, "modulus is not in the upper half plane");
  EllipticReport rep;

  if (tau.is_exact() && !tau.is_rational()) {
    const NumberFieldElement& x = tau.exact();
    auto radicand = x.field()->quadratic_radicand();
    if (radicand && *radicand < 0 && is_integral(*radicand)) {
      Rational re = x.coeffs()[0], im = x.coeffs().size() > 1 ? x.coeffs()[1] : Rational(0);
      const Rational r = *radicand;
      Mat2 m{1, 0, 0, 1};
      for (;;) {
        Integer n = ceil_rational(re - Rational(1, 2));
        if (n != 0) {
          re -= Rational(n);
          m = compose(translation(n), m);
        }
        Rational norm = re * re - r * im * im;
        if (norm >= 1) {
          if (norm == 1 && re < 0) {
            re = -re;
            m = compose(kInvert, m);
          }
          break;
        }
        re = -re / norm;
        im = im / norm;
        m = compose(kInvert, m);
      }
      rep.tau = ExactComplex(NumberFieldElement(x.field(), {re, im}).simplified(), prec);
      rep.transform = m;
      fill_cm(rep, primitive({re * re - r * im * im, -2 * re, Rational(1)}));
      return rep;
    }
  }

  // numeric reduction, then the same transform applied to the input value
  Precision work = prec + 32;
  Complex z = tv.with_precision(work);
  Mat2 m{1, 0, 0, 1};
  Real half(0.5, work), one(1L, work);
  for (int it = 0; it < 10000; ++it) {
    Integer n = floor_real(z.re + half);
    if (Real(n, work) - z.re == half) n -= 1;  // keep Re in (-1/2, 1/2]
    if (n != 0) {
      z.re -= Real(n, work);
      m = compose(translation(n), m);
    }
    Real nrm = norm(z);
    if (!(nrm < one)) break;
    z = Complex(-z.re / nrm, z.im / nrm);
    m = compose(kInvert, m);
  }
  ExactComplex a{Rational(m[0])}, b{Rational(m[1])}, c{Rational(m[2])}, dd{Rational(m[3])};
  rep.tau = (a * tau + b) / (c * tau + dd);
  rep.transform = m;
  Complex reduced = eval_numeric(rep.tau, prec);
  if (auto poly = find_minimal_polynomial(reduced, 2, prec)) {
    fill_cm(rep, *poly);
    rep.recognized = !tau.is_exact();
  }
  return rep;
}

EllipticReport elliptic_normalize(const pav::PolarizedAV& e) {
  if (e.g() != 1) throw Error(ErrorKind::InvalidArgument, "elliptic normalization needs dimension 1");
  return elliptic_normalize(e.type.d[0], e.z(0, 0), e.precision);
}

}  // namespace abvar::decompose
