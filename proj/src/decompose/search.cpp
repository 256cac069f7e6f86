#include "abvar/decompose/decompose.hpp"

#include <algorithm>

namespace abvar::decompose {

namespace {

// a12 a13 a14 a23 a24 a34
constexpr size_t A12 = 0, A13 = 1, A14 = 2, A23 = 3, A24 = 4, A34 = 5;

Rational pfaffian(const std::vector<Rational>& a) { return a[A14] * a[A23] - a[A13] * a[A24] + a[A12] * a[A34]; }

Rational pfaffian_polar(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  return x[A14] * y[A23] + y[A14] * x[A23] - x[A13] * y[A24] - y[A13] * x[A24] + x[A12] * y[A34] + y[A12] * x[A34];
}

Integer height(const Rational& q) {
  Integer n = abs(q.get_num());
  return std::max(n, Integer(q.get_den()));
}

Integer max_height(const std::vector<Rational>& a) {
  Integer h = 1;
  for (const auto& q : a) h = std::max(h, height(q));
  return h;
}

bool lex_less(const std::vector<Rational>& x, const std::vector<Rational>& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return make_rational(rn, rd);
}

// rationals of height <= h, smallest height first
std::vector<Rational> rationals_up_to(long h) {
  std::vector<Rational> out{Rational(0)};
  for (long hh = 1; hh <= h; ++hh)
    for (long q = 1; q <= hh; ++q)
      for (long p = -hh; p <= hh; ++p) {
        if (std::max(std::labs(p), q) != hh) continue;
        Integer g;
        Integer pp = p, qq = q;
        mpz_gcd(g.get_mpz_t(), pp.get_mpz_t(), qq.get_mpz_t());
        if (g != 1) continue;
        out.push_back(make_rational(p, q));
      }
  return out;
}

pav::PolarizedAV normalized(const pav::PolarizedAV& a) {
  if (a.type.d.front() == 1) return a;
  pav::BuildOptions opts;
  opts.label = a.label;
  opts.precision = a.precision;
  return pav::build_period(a.type, a.z, opts);
}

std::vector<ExactComplex> second_equation(const pav::PolarizedAV& a) {
  ExactComplex d(Rational(a.type.d[1]));
  const ExactComplex &z11 = a.z(0, 0), &z12 = a.z(0, 1), &z22 = a.z(1, 1);
  std::vector<ExactComplex> row(7, ExactComplex(0L));
  row[A12] = z11 * z22 - z12 * z12;
  row[A13] = d * z12;
  row[A14] = -(d * z11);
  row[A23] = z22;
  row[A24] = -z12;
  row[A34] = d;
  return row;
}

}  // namespace

CriterionValues criterion_values(const pav::PolarizedAV& a, const std::vector<Rational>& coeffs) {
  if (a.g() != 2 || coeffs.size() != 6) throw Error(ErrorKind::InvalidArgument, "criterion needs g = 2 and 6 coefficients");
  pav::PolarizedAV n = normalized(a);
  Rational d(n.type.d[1]);
  CriterionValues out;
  out.trace = d * coeffs[A13] + coeffs[A24] + d;
  std::vector<ExactComplex> row = second_equation(n);
  out.second = ExactComplex(0L);
  for (size_t k = 0; k < 6; ++k) out.second += row[k] * ExactComplex(coeffs[k]);
  out.pfaffian = pfaffian(coeffs);
  return out;
}

bool family_contains(const SubEllipticResult& r, const std::vector<Rational>& coeffs) {
  if (coeffs.size() != 6) return false;
  for (size_t i = 0; i < r.system.rows.rows(); ++i) {
    Rational s = r.system.rows(i, 6);
    for (size_t k = 0; k < 6; ++k) s += r.system.rows(i, k) * coeffs[k];
    if (s != 0) return false;
  }
  return pfaffian(coeffs) == 0;
}

SubEllipticResult sub_elliptic_search_g2(const pav::PolarizedAV& input, const SearchOptions& opts,
                                         const std::function<bool(const NSForm&)>& accept) {
  if (input.g() != 2) throw Error(ErrorKind::InvalidArgument, "sub-elliptic search needs a surface");
  pav::PolarizedAV a = normalized(input);
  SubEllipticResult out;
  out.d = a.type.d[1].get_ui();
  Rational d(a.type.d[1]);

  SeparatedSystem second = separate({second_equation(a)}, 6, a.precision);
  RatMatrix trace(1, 7);
  trace(0, A13) = d;
  trace(0, A24) = 1;
  trace(0, 6) = d;
  out.system = second;
  out.system.rows = vstack(trace, second.rows);
  out.family = solve_affine(out.system.rows);

  auto consider = [&](const std::vector<Rational>& cand, std::vector<std::vector<Rational>>& bucket) {
    if (pfaffian(cand) != 0) return;
    bucket.push_back(cand);
  };
  auto finish = [&](std::vector<std::vector<Rational>>& bucket) {
    std::sort(bucket.begin(), bucket.end(), lex_less);
    bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
    for (const auto& cand : bucket) {
      if (out.solutions.size() >= opts.max_solutions) break;
      NSForm f{2, cand};
      if (accept && !accept(f)) continue;
      out.solutions.push_back(f);
    }
    if (!out.solutions.empty()) out.canonical = out.solutions.front();
    return !out.solutions.empty();
  };

  if (!out.family.consistent) {
    out.complete = second.exact;
    out.height_searched = opts.max_height;
    return out;
  }
  const auto& base = out.family.particular;
  const RatMatrix& dir = out.family.directions;
  size_t k = dir.cols();
  if (k == 0) {
    std::vector<std::vector<Rational>> bucket;
    ++out.evaluated;
    consider(base, bucket);
    finish(bucket);
    out.complete = second.exact && out.solutions.empty() && pfaffian(base) != 0;
    out.height_searched = opts.max_height;
    return out;
  }

  std::vector<Rational> last(6);
  for (size_t r = 0; r < 6; ++r) last[r] = dir(r, k - 1);
  Rational alpha = pfaffian(last);
  std::vector<Rational> values = rationals_up_to(opts.max_height);

  for (long h = 1; h <= opts.max_height; ++h) {
    // the value list is ordered by height, so a prefix holds everything up to h
    size_t limit = 0;
    while (limit < values.size() && height(values[limit]) <= h) ++limit;
    std::vector<std::vector<Rational>> bucket;
    std::vector<size_t> idx(k - 1, 0);
    bool done = false;
    while (!done) {
      ++out.evaluated;
      std::vector<Rational> point = base;
      for (size_t t = 0; t + 1 < k; ++t)
        for (size_t r = 0; r < 6; ++r) point[r] += dir(r, t) * values[idx[t]];
      Rational beta = pfaffian_polar(point, last);
      Rational gamma = pfaffian(point);
      std::vector<Rational> roots;
      if (alpha != 0) {
        if (auto s = rational_sqrt(beta * beta - 4 * alpha * gamma)) {
          roots.push_back((-beta + *s) / (2 * alpha));
          if (*s != 0) roots.push_back((-beta - *s) / (2 * alpha));
        }
      } else if (beta != 0) {
        roots.push_back(-gamma / beta);
      } else if (gamma == 0) {
        roots.assign(values.begin(), values.begin() + static_cast<long>(limit));
      }
      for (const auto& t : roots) {
        std::vector<Rational> cand = point;
        for (size_t r = 0; r < 6; ++r) cand[r] += last[r] * t;
        if (max_height(cand) == h) consider(cand, bucket);
      }
      if (out.evaluated > opts.max_candidates) {
        out.truncated = true;
        break;
      }
      // odometer over the first k - 1 parameters
      size_t p = 0;
      while (p < idx.size() && ++idx[p] == limit) idx[p++] = 0;
      if (p == idx.size()) done = true;
    }
    if (out.truncated) {
      out.height_searched = h - 1;
      if (finish(bucket)) out.height_searched = h;
      return out;
    }
    out.height_searched = h;
    if (finish(bucket)) return out;
  }
  return out;
}

IdempotentPair idempotent_from_endomorphism(const pav::PolarizedAV& a, const RatMatrix& input) {
  size_t n = 2 * a.g();
  if (input.rows() != n || input.cols() != n)
    throw Error(ErrorKind::InvalidArgument, "endomorphism must be " + std::to_string(n) + "x" + std::to_string(n));
  if (input.is_zero()) throw Error(ErrorKind::DegenerateRank, "endomorphism is zero");
  RatMatrix sq = input * input;
  Rational c = 0;
  for (size_t k = 0; k < input.data().size(); ++k)
    if (input.data()[k] != 0) {
      c = sq.data()[k] / input.data()[k];
      break;
    }
  if (c == 0 || sq != c * input) throw Error(ErrorKind::NotIdempotent, "f^2 is not a multiple of f");
  IdempotentPair out;
  out.scale = c;
  out.f = (Rational(1) / c) * input;
  size_t r = latalg::rank(out.f);
  if (r == 0 || r == n) throw Error(ErrorKind::DegenerateRank, "idempotent has rank " + std::to_string(r));
  pav::analytic_from_rational(a, a, out.f);
  out.complement = RatMatrix::identity(n) - out.f;
  return out;
}

IdempotentPair idempotent_from_ns(const pav::PolarizedAV& a, const NSForm& form) {
  if (form.g != a.g()) throw Error(ErrorKind::InvalidArgument, "form dimension mismatch");
  RatMatrix f = latalg::inverse(latalg::to_rational(a.j())) * form.e_omega();
  return idempotent_from_endomorphism(a, f);
}

std::pair<subvariety::SubvarietyEmbedding, subvariety::SubvarietyEmbedding> decompose_step(
    const pav::PolarizedAV& a, const IdempotentPair& pair) {
  auto first = subvariety::subvariety_period(a, pair.f);
  auto second = subvariety::subvariety_period(a, pair.complement);
  if (first.d.g() + second.d.g() != a.g())
    throw Error(ErrorKind::RankMismatch, "complementary images do not add up to the dimension");
  return {std::move(first), std::move(second)};
}

}  // namespace abvar::decompose
