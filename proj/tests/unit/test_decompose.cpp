#include "abvar/decompose/decompose.hpp"
#include "fixtures.hpp"
#include "helpers.hpp"

#include <algorithm>
#include <doctest.h>

using namespace abvar;
using namespace abvar::decompose;
using namespace fixtures;
using testing_helpers::random_rational;
using testing_helpers::uniform;

namespace {

std::vector<Rational> rats(std::initializer_list<std::pair<long, long>> xs) {
  std::vector<Rational> out;
  for (auto [p, q] : xs) out.push_back(make_rational(p, q));
  return out;
}

const std::vector<Rational> kSurfaceSolution = rats({{1, 2}, {-1, 2}, {1, 2}, {0, 1}, {-1, 2}, {1, 2}});
const std::vector<Rational> kElevenSolution = rats({{0, 1}, {-1, 1}, {-4, 3}, {0, 1}, {0, 1}, {0, 1}});

pav::PolarizedAV eleven() { return pav::build_period(raw_eleven_type(), raw_eleven_z()); }

pav::PolarizedAV product(const ExactComplex& a, const ExactComplex& b) {
  return pav::build_period(pav::make_type({1, 1}), diag_z(a, b));
}

// Brute-force exterior algebra: forms as lists of (sorted index list, coefficient).
using Term = std::pair<std::vector<size_t>, ExactComplex>;

int permutation_sign(std::vector<size_t> v) {
  int sign = 1;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j + 1 < v.size() - i; ++j)
      if (v[j] > v[j + 1]) {
        std::swap(v[j], v[j + 1]);
        sign = -sign;
      }
  return sign;
}

std::vector<Term> wedge(const std::vector<Term>& x, const std::vector<Term>& y) {
  std::vector<Term> out;
  for (const auto& [ix, cx] : x)
    for (const auto& [iy, cy] : y) {
      std::vector<size_t> idx = ix;
      idx.insert(idx.end(), iy.begin(), iy.end());
      std::vector<size_t> sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      ExactComplex c = cx * cy;
      if (permutation_sign(idx) < 0) c = -c;
      auto it = std::find_if(out.begin(), out.end(), [&](const Term& t) { return t.first == sorted; });
      if (it == out.end()) out.emplace_back(sorted, c);
      else it->second += c;
    }
  return out;
}

ExactComplex lookup(const ExteriorForm& f, const std::vector<size_t>& idx) {
  std::uint32_t mask = 0;
  for (size_t i : idx) mask |= 1u << i;
  auto it = f.find(mask);
  return it == f.end() ? ExactComplex(0L) : it->second;
}

CMatrix random_gaussian_z(size_t g) {
  // Z = X + i Y with Y diagonally dominant
  CMatrix z(g, g);
  for (size_t i = 0; i < g; ++i)
    for (size_t j = i; j < g; ++j) {
      Rational re = random_rational(5);
      Rational im = i == j ? Rational(static_cast<long>(2 * g + uniform(0, 3))) : make_rational(uniform(-1, 1), 2);
      z(i, j) = ExactComplex(quadratic_element(re, im, -1));
      z(j, i) = z(i, j);
    }
  return z;
}

}  // namespace

TEST_SUITE("decompose") {
  TEST_CASE("pair indexing and form matrices") {
    CHECK(pair_count(4) == 6);
    CHECK(pair_index(4, 0, 1) == 0);
    CHECK(pair_index(4, 1, 2) == 3);
    CHECK(pair_index(4, 2, 3) == 5);
    size_t k = 0;
    for (size_t i = 0; i < 6; ++i)
      for (size_t j = i + 1; j < 6; ++j) CHECK(pair_index(6, i, j) == k++);
    NSForm f = make_form(2, kSurfaceSolution);
    RatMatrix e = f.e_omega();
    CHECK(e.transpose() == -e);
    CHECK(e(0, 1) == make_rational(-1, 2));
    CHECK(form_from_matrix(e) == f);
    CHECK_THROWS_AS(make_form(2, {Rational(1)}), Error);
  }

  TEST_CASE("wedge expansion matches a brute-force exterior algebra") {
    for (size_t g : {2, 3}) {
      for (int t = 0; t < 5; ++t) {
        pav::PolarizedAV a = pav::build_period(pav::make_type(g == 2 ? std::initializer_list<long>{1, 2}
                                                                     : std::initializer_list<long>{1, 1, 2}),
                                               random_gaussian_z(g));
        CMatrix pi = a.period();
        size_t n = 2 * g;
        std::vector<Term> acc{{{}, ExactComplex(1L)}};
        for (size_t k = 0; k < g; ++k) {
          std::vector<Term> dz;
          for (size_t m = 0; m < n; ++m) dz.emplace_back(std::vector<size_t>{m}, pi(k, m));
          acc = wedge(acc, dz);
        }
        std::vector<Rational> coeffs;
        std::vector<Term> omega;
        for (size_t i = 0; i < n; ++i)
          for (size_t j = i + 1; j < n; ++j) {
            coeffs.push_back(random_rational(4));
            omega.emplace_back(std::vector<size_t>{i, j}, ExactComplex(coeffs.back()));
          }
        std::vector<Term> full = wedge(omega, acc);
        ExteriorForm vol = holomorphic_volume(pi);
        for (const auto& [idx, c] : acc) CHECK(lookup(vol, idx) == c);
        std::vector<ExactComplex> ce(coeffs.begin(), coeffs.end());
        ExteriorForm fast = wedge_two_form(ce, vol, n);
        for (const auto& [idx, c] : full) CHECK(lookup(fast, idx) == c);
        size_t nonzero = std::count_if(full.begin(), full.end(), [](const Term& x) { return !x.second.is_zero(); });
        CHECK(fast.size() == nonzero);
      }
    }
  }

  TEST_CASE("Neron-Severi membership") {
    pav::PolarizedAV split = product(i_times(1), i_times(2));
    std::vector<Rational> proj(6, Rational(0));
    proj[1] = -1;
    CHECK(ns_membership(split, proj).member);
    CHECK(ns_membership(surface(), kSurfaceSolution).member);
    CHECK(ns_membership(eleven(), kElevenSolution).member);
    int rejected = 0;
    for (int t = 0; t < 20; ++t) {
      pav::PolarizedAV a = pav::build_period(pav::make_type({1, 1}), random_gaussian_z(2));
      std::vector<Rational> c;
      for (int k = 0; k < 6; ++k) c.push_back(random_rational(9));
      NSMembership m = ns_membership(a, c);
      if (!m.member) {
        ++rejected;
        CHECK_FALSE(m.defect.empty());
      }
    }
    CHECK(rejected >= 19);
  }

  TEST_CASE("the wedge coefficient equals the second criterion equation in genus two") {
    std::vector<pav::PolarizedAV> hosts{surface(), eleven(), product(i_times(1), i_times(2))};
    for (int t = 0; t < 3; ++t) hosts.push_back(pav::build_period(pav::make_type({1, 1}), random_gaussian_z(2)));
    for (const auto& a : hosts)
      for (int t = 0; t < 100 / static_cast<int>(hosts.size()) + 1; ++t) {
        std::vector<Rational> c;
        for (int k = 0; k < 6; ++k) c.push_back(random_rational(7));
        NSMembership m = ns_membership(a, c);
        CriterionValues v = criterion_values(a, c);
        ExactComplex w = m.defect.empty() ? ExactComplex(0L) : m.defect.begin()->second;
        CHECK(w == v.second);
      }
  }

  TEST_CASE("sub-elliptic search on the genus-two surface") {
    SubEllipticResult r = sub_elliptic_search_g2(surface());
    CHECK(r.system.exact);
    CHECK(r.family.consistent);
    CHECK(family_contains(r, kSurfaceSolution));
    CriterionValues v = criterion_values(surface(), kSurfaceSolution);
    CHECK(v.trace == 0);
    CHECK(v.second.is_zero());
    CHECK(v.pfaffian == 0);
    REQUIRE(r.canonical);
    CHECK(r.canonical->a == rats({{-1, 2}, {-1, 2}, {-1, 2}, {0, 1}, {-1, 2}, {-1, 2}}));
    CHECK(r.height_searched == 2);
    CHECK(family_contains(r, r.canonical->a));
    CHECK(ns_membership(surface(), r.canonical->a).member);
    for (const auto& s : r.solutions) CHECK(family_contains(r, s.a));
    std::vector<Rational> bad = kSurfaceSolution;
    bad[0] += 1;
    CHECK_FALSE(family_contains(r, bad));
  }

  TEST_CASE("sub-elliptic search on the genus-eleven factor") {
    pav::PolarizedAV a = eleven();
    CHECK(a.type == pav::make_type({1, 3}));
    SubEllipticResult r = sub_elliptic_search_g2(a);
    CHECK(r.d == 3);
    CHECK(family_contains(r, kElevenSolution));
    REQUIRE(r.canonical);
    CHECK(r.canonical->a == rats({{0, 1}, {-1, 1}, {0, 1}, {2, 1}, {0, 1}, {0, 1}}));
    CHECK(ns_membership(a, r.canonical->a).member);
  }

  TEST_CASE("sub-elliptic search on a split product") {
    SubEllipticResult r = sub_elliptic_search_g2(product(i_times(1), i_times(2)));
    CHECK(family_contains(r, rats({{0, 1}, {-1, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}})));
    REQUIRE(r.canonical);
  }

  TEST_CASE("idempotents from Neron-Severi forms") {
    IdempotentPair p = idempotent_from_ns(surface(), make_form(2, kSurfaceSolution));
    RatMatrix one = RatMatrix::identity(4);
    CHECK(p.f * p.f == p.f);
    CHECK(p.complement * p.complement == p.complement);
    CHECK((p.f * p.complement).is_zero());
    CHECK(p.f + p.complement == one);
    CHECK((p.f == surface_f_omega() || p.complement == surface_f_omega()));

    pav::PolarizedAV s = surface();
    NSForm pol = form_from_matrix(latalg::to_rational(s.j()));
    try {
      idempotent_from_ns(s, pol);
      FAIL("expected rejection");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DegenerateRank);
    }

    pav::PolarizedAV split = product(i_times(1), i_times(2));
    IdempotentPair q = idempotent_from_ns(split, make_form(2, rats({{0, 1}, {-1, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}})));
    RatMatrix expected(4, 4);
    expected(0, 0) = 1;
    expected(2, 2) = 1;
    CHECK(q.f == expected);

    // twice the form gives 2 f, which is rescaled back
    std::vector<Rational> twice = kSurfaceSolution;
    for (auto& x : twice) x *= 2;
    IdempotentPair r = idempotent_from_ns(s, make_form(2, twice));
    CHECK(r.scale == 2);
    CHECK(r.f == p.f);
  }

  TEST_CASE("every accepted canonical form yields an exact idempotent") {
    for (const auto& a : {surface(), eleven(), product(i_times(1), i_times(2))}) {
      SubEllipticResult r = sub_elliptic_search_g2(a);
      for (const auto& s : r.solutions) {
        IdempotentPair p = idempotent_from_ns(a, s);
        CHECK(p.f * p.f == p.f);
        CHECK((p.f * p.complement).is_zero());
      }
    }
  }

  TEST_CASE("elliptic normalization") {
    auto check = [](long d, const ExactComplex& w, const ExactComplex& tau, long disc) {
      EllipticReport r = elliptic_normalize(Integer(d), w);
      CHECK(r.tau == tau);
      CHECK(r.cm);
      CHECK(r.discriminant == disc);
      CHECK(r.min_poly.size() == 3);
    };
    check(6, i_times(6), i_times(1), -4);
    check(8, quad(4, 1, 4, 1, -3), quad(1, 2, 1, 2, -3), -3);
    check(8, i_times(8), i_times(1), -4);
    check(1, i_times(1), i_times(1), -4);
    // i sqrt2 / 2 lies inside the unit disc; its reduction is i sqrt2
    EllipticReport r = elliptic_normalize(Integer(3), quad(0, 1, 3, 2, -2));
    CHECK(r.tau == quad(0, 1, 1, 1, -2));
    CHECK(reduced_form(r.tau) == reduced_form(quad(0, 1, 1, 2, -2)));
    CHECK(r.discriminant == -8);
    // boundary cases: Re = -1/2 maps to 1/2, the unit circle keeps Re >= 0
    CHECK(elliptic_normalize(Integer(1), quad(-1, 2, 1, 2, -3)).tau == quad(1, 2, 1, 2, -3));
    CHECK(elliptic_normalize(Integer(2), quad(-1, 1, 1, 1, -15)).tau == quad(1, 2, 1, 2, -15));
    // random moduli: the output is in the fundamental domain and the transform is in SL2(Z)
    for (int t = 0; t < 50; ++t) {
      ExactComplex z = quad(uniform(-40, 40), uniform(1, 9), uniform(1, 20), uniform(1, 9), -uniform(1, 30));
      if (eval_numeric(z, 128).im.sign() <= 0) continue;
      EllipticReport e = elliptic_normalize(Integer(1), z);
      Complex v = eval_numeric(e.tau, 128);
      CHECK(v.re > Real(-0.5, 128));
      CHECK(v.re <= Real(0.5, 128));
      CHECK(norm(v) >= Real(1L, 128));
      const auto& m = e.transform;
      CHECK(m[0] * m[3] - m[1] * m[2] == 1);
      ExactComplex back = (ExactComplex(Rational(m[0])) * z + ExactComplex(Rational(m[1]))) /
                          (ExactComplex(Rational(m[2])) * z + ExactComplex(Rational(m[3])));
      CHECK(back == e.tau);
      CHECK(reduced_form(e.tau) == reduced_form(z));
    }
  }

  TEST_CASE("float moduli reduce numerically") {
    // imaginary part 2^(1/4): degree four, so no quadratic relation exists
    Complex z(Real(3.3, 256), sqrt(sqrt(Real(2L, 256))) / Real(5L, 256));
    EllipticReport r = elliptic_normalize(Integer(1), ExactComplex(z));
    Complex v = eval_numeric(r.tau, 256);
    CHECK(norm(v) >= Real(1L, 256));
    CHECK(abs(v.re) <= Real(0.5, 256));
    CHECK_FALSE(r.cm);
  }

  TEST_CASE("decomposition of the genus-two surface") {
    DecompositionTree t = poincare_decompose(surface());
    REQUIRE(t.kind == NodeKind::Split);
    CHECK(t.degree == 4);
    CHECK(pav::isogeny_degree(t.isogeny) == 4);
    auto ls = leaves(t);
    REQUIRE(ls.size() == 2);
    std::vector<std::array<Integer, 3>> forms;
    for (const auto* l : ls) {
      REQUIRE(l->kind == NodeKind::Elliptic);
      CHECK(l->elliptic->cm);
      CHECK(l->elliptic->discriminant % 8 == 0);
      forms.push_back(reduced_form(l->elliptic->tau));
    }
    std::vector<std::array<Integer, 3>> expected{reduced_form(quad(1, 1, 1, 1, -2)), reduced_form(quad(1, 3, 1, 3, -2))};
    std::sort(forms.begin(), forms.end());
    std::sort(expected.begin(), expected.end());
    CHECK(forms == expected);
    AssembledIsogeny iso = assemble(t);
    CHECK(iso.p.transpose() * surface().j() * iso.p == latalg::alternating_standard(iso.types.d));
    CHECK(abs(latalg::determinant(iso.p)) == t.degree);
  }

  TEST_CASE("decomposition of the genus-eleven factor") {
    DecompositionTree t = poincare_decompose(eleven());
    REQUIRE(t.kind == NodeKind::Split);
    auto ls = leaves(t);
    REQUIRE(ls.size() == 2);
    bool found = false;
    for (const auto* l : ls) {
      REQUIRE(l->kind == NodeKind::Elliptic);
      CHECK(l->elliptic->cm);
      // CM by Q(sqrt -6): discriminant -24 times a square
      Integer q = -l->elliptic->discriminant / 24;
      CHECK(-l->elliptic->discriminant % 24 == 0);
      CHECK(mpz_perfect_square_p(q.get_mpz_t()));
      if (reduced_form(l->elliptic->tau) == reduced_form(quad(0, 1, 1, 6, -6))) found = true;
    }
    CHECK(found);
    AssembledIsogeny iso = assemble(t);
    CHECK(iso.p.transpose() * eleven().j() * iso.p == latalg::alternating_standard(iso.types.d));
  }

  TEST_CASE("content does not change the leaves") {
    CMatrix z = z_surface();
    CMatrix scaled(2, 2);
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j) scaled(i, j) = z(i, j) * ExactComplex(5L);
    pav::PolarizedAV a = pav::build_period(pav::make_type({5, 5}), scaled);
    DecompositionTree t = poincare_decompose(a);
    DecompositionTree u = poincare_decompose(surface());
    auto la = leaves(t), lb = leaves(u);
    REQUIRE(la.size() == lb.size());
    for (size_t k = 0; k < la.size(); ++k) CHECK(la[k]->elliptic->tau == lb[k]->elliptic->tau);
  }

  TEST_CASE("a single elliptic curve is a leaf") {
    CMatrix z(1, 1);
    z(0, 0) = i_times(1);
    DecompositionTree t = poincare_decompose(pav::build_period(pav::make_type({1}), z));
    CHECK(t.kind == NodeKind::Elliptic);
    CHECK(t.elliptic->tau == i_times(1));
    CHECK(t.elliptic->discriminant == -4);
  }

  TEST_CASE("split products of float curves") {
    for (int t = 0; t < 5; ++t) {
      Complex z1(Real(uniform(-50, 50) / 100.0, 256), Real(uniform(90, 300) / 100.0, 256));
      Complex z2(Real(uniform(-50, 50) / 100.0, 256), Real(uniform(90, 300) / 100.0, 256));
      z1.re += pow2(-60, 256) * Real(3L, 256);  // move off dyadic grid values
      z2.im += pow2(-70, 256) * Real(5L, 256);
      pav::PolarizedAV a = product(ExactComplex(z1), ExactComplex(z2));
      DecompositionTree tr = poincare_decompose(a);
      REQUIRE(tr.kind == NodeKind::Split);
      CHECK(tr.degree == 1);
      auto ls = leaves(tr);
      REQUIRE(ls.size() == 2);
      std::vector<Complex> want{eval_numeric(elliptic_normalize(Integer(1), ExactComplex(z1)).tau, 256),
                                eval_numeric(elliptic_normalize(Integer(1), ExactComplex(z2)).tau, 256)};
      for (const auto* l : ls) {
        Complex got = eval_numeric(l->elliptic->tau, 256);
        bool match = false;
        for (const auto& w : want) match = match || abs(got - w) <= pow2(-100, 256);
        CHECK(match);
      }
    }
  }

  TEST_CASE("a product of three curves splits completely") {
    CMatrix z(3, 3);
    z(0, 0) = i_times(1);
    z(1, 1) = i_times(2);
    z(2, 2) = quad(1, 2, 1, 2, -3);
    pav::PolarizedAV a = pav::build_period(pav::make_type({1, 1, 1}), z);
    DecompositionTree t = poincare_decompose(a);
    REQUIRE(t.kind == NodeKind::Split);
    auto ls = leaves(t);
    CHECK(ls.size() == 3);
    size_t dims = 0;
    for (const auto* l : ls) {
      dims += l->g();
      CHECK(l->kind == NodeKind::Elliptic);
    }
    CHECK(dims == 3);
    AssembledIsogeny iso = assemble(t);
    CHECK(iso.p.transpose() * a.j() * iso.p == latalg::alternating_standard(iso.types.d));
    Integer product_of_degrees = 1;
    std::function<void(const DecompositionTree&)> walk = [&](const DecompositionTree& n) {
      if (n.kind == NodeKind::Split) product_of_degrees *= n.degree;
      for (const auto& c : n.children) walk(c);
    };
    walk(t);
    CHECK(abs(latalg::determinant(iso.p)) == product_of_degrees);
  }

  TEST_CASE("the surface times a curve splits into three elliptic curves") {
    CMatrix z(3, 3);
    CMatrix zs = z_surface();
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j) z(i, j) = zs(i, j);
    z(2, 2) = i_times(1);
    pav::PolarizedAV a = pav::build_period(pav::make_type({1, 1, 1}), z);
    DecompositionTree t = poincare_decompose(a);
    auto ls = leaves(t);
    CHECK(ls.size() == 3);
    for (const auto* l : ls) CHECK(l->kind == NodeKind::Elliptic);
  }

  TEST_CASE("supplied endomorphisms are used first") {
    DecomposeOptions opts;
    opts.endomorphisms.push_back(surface_f_omega());
    DecompositionTree t = poincare_decompose(surface(), opts);
    CHECK(t.kind == NodeKind::Split);
    CHECK(t.method == "supplied endomorphism");
    CHECK(t.f == surface_f_omega());
  }
}
