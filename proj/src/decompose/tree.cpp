#include "abvar/decompose/decompose.hpp"

namespace abvar::decompose {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Split: return "split";
    case NodeKind::Elliptic: return "elliptic";
    case NodeKind::SimpleCertified: return "simple-certified";
    case NodeKind::SearchExhausted: return "search-exhausted";
  }
  return "unknown";
}

namespace {

struct Candidate {
  IdempotentPair pair;
  std::optional<NSForm> form;
  std::string method;
};

IntMatrix interleave(const IntMatrix& p1, const IntMatrix& p2) {
  size_t h1 = p1.cols() / 2, h2 = p2.cols() / 2;
  IntMatrix out(p1.rows(), p1.cols() + p2.cols());
  for (size_t i = 0; i < p1.rows(); ++i) {
    for (size_t j = 0; j < h1; ++j) {
      out(i, j) = p1(i, j);
      out(i, h1 + h2 + j) = p1(i, h1 + j);
    }
    for (size_t j = 0; j < h2; ++j) {
      out(i, h1 + j) = p2(i, j);
      out(i, 2 * h1 + h2 + j) = p2(i, h2 + j);
    }
  }
  return out;
}

// Minimal polynomial (monic, low degree first) by Krylov dependence on matrix powers.
std::vector<Rational> minimal_polynomial(const RatMatrix& f) {
  size_t n = f.rows();
  std::vector<RatMatrix> powers{RatMatrix::identity(n)};
  for (size_t m = 1; m <= n; ++m) {
    powers.push_back(powers.back() * f);
    RatMatrix cols(n * n, m), rhs(n * n, 1);
    for (size_t k = 0; k < m; ++k)
      for (size_t e = 0; e < n * n; ++e) cols(e, k) = powers[k].data()[e];
    for (size_t e = 0; e < n * n; ++e) rhs(e, 0) = powers[m].data()[e];
    latalg::SolveResult s = latalg::solve_exact(cols, rhs);
    if (s.consistent) {
      std::vector<Rational> poly(m + 1);
      for (size_t k = 0; k < m; ++k) poly[k] = -s.x(k, 0);
      poly[m] = 1;
      return poly;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "minimal polynomial search exceeded the dimension");
}

std::vector<Integer> divisors(Integer v) {
  v = abs(v);
  std::vector<Integer> out;
  if (v == 0 || v > Integer("1000000000000")) return out;
  for (Integer d = 1; d * d <= v; ++d)
    if (v % d == 0) {
      out.push_back(d);
      if (d * d != v) out.push_back(v / d);
    }
  return out;
}

std::vector<Rational> rational_roots(const std::vector<Rational>& poly) {
  Integer l = 1;
  for (const auto& q : poly) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Integer> c;
  for (const auto& q : poly) c.push_back(Rational(q * Rational(l)).get_num());
  std::vector<Rational> roots;
  size_t shift = 0;
  while (shift < c.size() && c[shift] == 0) ++shift;
  if (shift > 0) roots.push_back(0);
  auto eval = [&](const Rational& x) {
    Rational s = 0;
    for (size_t k = c.size(); k-- > shift;) s = s * x + Rational(c[k]);
    return s;
  };
  for (const auto& p : divisors(c[shift]))
    for (const auto& q : divisors(c.back()))
      for (int sign : {1, -1}) {
        Rational x = make_rational(sign * p, q);
        if (eval(x) == 0 && std::find(roots.begin(), roots.end(), x) == roots.end()) roots.push_back(x);
      }
  return roots;
}

// Spectral projector of f onto the eigenvalue lambda, for a squarefree minimal polynomial.
std::optional<RatMatrix> projector(const RatMatrix& f, const std::vector<Rational>& poly, const Rational& lambda) {
  // synthetic division by (x - lambda)
  size_t deg = poly.size() - 1;
  std::vector<Rational> q(deg);
  Rational carry = 0;
  for (size_t k = deg; k-- > 0;) {
    carry = poly[k + 1] + carry * lambda;
    q[k] = carry;
  }
  Rational at = 0;
  for (size_t k = q.size(); k-- > 0;) at = at * lambda + q[k];
  if (at == 0) return std::nullopt;
  RatMatrix acc(f.rows(), f.cols());
  for (size_t k = q.size(); k-- > 0;) acc = acc * f + q[k] * RatMatrix::identity(f.rows());
  return (Rational(1) / at) * acc;
}

bool usable(const pav::PolarizedAV& a, const IdempotentPair& pair) {
  try {
    decompose_step(a, pair);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::optional<Candidate> from_endomorphism(const pav::PolarizedAV& a, const RatMatrix& f, const std::string& method) {
  try {
    IdempotentPair pair = idempotent_from_endomorphism(a, f);
    if (usable(a, pair)) return Candidate{pair, std::nullopt, method};
  } catch (const Error&) {
  }
  return std::nullopt;
}

// Bounded search through small integer combinations of a Neron-Severi basis.
std::optional<Candidate> heuristic_split(const pav::PolarizedAV& a, const NSKernel& ker, std::uint64_t budget) {
  size_t k = ker.basis.cols();
  RatMatrix jinv = latalg::inverse(latalg::to_rational(a.j()));
  std::uint64_t tried = 0;
  for (long bound = 1; bound <= 3; ++bound) {
    std::vector<long> c(k, -bound);
    for (;;) {
      long mx = 0;
      size_t first = k;
      for (size_t i = 0; i < k; ++i) {
        mx = std::max(mx, std::labs(c[i]));
        if (first == k && c[i] != 0) first = i;
      }
      if (mx == bound && first < k && c[first] > 0) {
        if (++tried > budget) return std::nullopt;
        std::vector<Rational> coeffs(ker.basis.rows(), Rational(0));
        for (size_t i = 0; i < k; ++i)
          for (size_t r = 0; r < coeffs.size(); ++r) coeffs[r] += Rational(c[i]) * ker.basis(r, i);
        NSForm form{a.g(), coeffs};
        RatMatrix f = jinv * form.e_omega();
        if (auto cand = from_endomorphism(a, f, "heuristic NS combination")) {
          cand->form = form;
          return cand;
        }
        std::vector<Rational> poly = minimal_polynomial(f);
        if (poly.size() > 2) {
          for (const auto& lambda : rational_roots(poly)) {
            auto e = projector(f, poly, lambda);
            if (!e) continue;
            if (auto cand = from_endomorphism(a, *e, "heuristic eigenprojector")) {
              cand->form = form;
              return cand;
            }
          }
        }
      }
      size_t p = 0;
      while (p < k && ++c[p] > bound) c[p++] = -bound;
      if (p == k) break;
    }
  }
  return std::nullopt;
}

DecompositionTree build(const pav::PolarizedAV& a, const DecomposeOptions& opts, size_t depth);

void apply_split(DecompositionTree& t, const Candidate& cand, const DecomposeOptions& opts, size_t depth) {
  auto [e1, e2] = decompose_step(t.node, cand.pair);
  t.kind = NodeKind::Split;
  t.method = cand.method;
  t.form = cand.form;
  t.f = cand.pair.f;
  t.scale = cand.pair.scale;
  t.children.push_back(build(e1.factor, opts, depth + 1));
  t.children.push_back(build(e2.factor, opts, depth + 1));
  t.isogeny = interleave(e1.p, e2.p);
  t.degree = abs(latalg::determinant(t.isogeny));
  t.embeddings.push_back(std::move(e1));
  t.embeddings.push_back(std::move(e2));
}

DecompositionTree build(const pav::PolarizedAV& a, const DecomposeOptions& opts, size_t depth) {
  DecompositionTree t;
  t.node = a;
  size_t g = a.g();
  if (depth > 16) throw Error(ErrorKind::InvalidArgument, "recursion depth exceeded");
  if (g == 1) {
    t.kind = NodeKind::Elliptic;
    t.elliptic = elliptic_normalize(a);
    t.method = "elliptic";
    return t;
  }
  for (const auto& f : opts.endomorphisms)
    if (f.rows() == 2 * g)
      if (auto cand = from_endomorphism(a, f, "supplied endomorphism")) {
        apply_split(t, *cand, opts, depth);
        return t;
      }
  for (const auto& form : opts.forms)
    if (form.g == g) {
      try {
        IdempotentPair pair = idempotent_from_ns(a, form);
        if (usable(a, pair)) {
          apply_split(t, Candidate{pair, form, "supplied form"}, opts, depth);
          return t;
        }
      } catch (const Error&) {
      }
    }
  if (g > opts.max_genus) {
    t.kind = NodeKind::SearchExhausted;
    t.method = "size gate";
    return t;
  }
  if (g == 2) {
    auto accept = [&](const NSForm& form) {
      try {
        return usable(a, idempotent_from_ns(a, form));
      } catch (const Error&) {
        return false;
      }
    };
    SubEllipticResult res = sub_elliptic_search_g2(a, opts.search, accept);
    t.search_height = res.height_searched;
    if (res.canonical) {
      apply_split(t, Candidate{idempotent_from_ns(a, *res.canonical), res.canonical, "sub-elliptic search"}, opts,
                  depth);
      return t;
    }
    bool certified = a.exact() && res.complete && res.system.exact;
    t.kind = certified ? NodeKind::SimpleCertified : NodeKind::SearchExhausted;
    t.method = certified ? "criterion has no rational solution" : "sub-elliptic search exhausted";
    return t;
  }
  t.search_height = 3;
  if (!opts.heuristic) {
    t.kind = NodeKind::SearchExhausted;
    t.method = "no candidate supplied";
    return t;
  }
  NSKernel ker = ns_kernel(a);
  if (ker.exact && ker.basis.cols() == 1) {
    // the polarization spans NS, so there is no nontrivial symmetric idempotent
    t.kind = NodeKind::SimpleCertified;
    t.method = "Neron-Severi rank one";
    return t;
  }
  if (auto cand = heuristic_split(a, ker, opts.heuristic_budget)) {
    apply_split(t, *cand, opts, depth);
    return t;
  }
  t.kind = NodeKind::SearchExhausted;
  t.method = "heuristic search exhausted";
  return t;
}

void collect(const DecompositionTree& t, std::vector<const DecompositionTree*>& out) {
  if (t.children.empty()) {
    out.push_back(&t);
    return;
  }
  for (const auto& c : t.children) collect(c, out);
}

}  // namespace

DecompositionTree poincare_decompose(const pav::PolarizedAV& a, const DecomposeOptions& opts) {
  return build(a, opts, 0);
}

std::vector<const DecompositionTree*> leaves(const DecompositionTree& t) {
  std::vector<const DecompositionTree*> out;
  collect(t, out);
  return out;
}

AssembledIsogeny assemble(const DecompositionTree& t) {
  if (t.children.empty()) return {IntMatrix::identity(2 * t.g()), t.node.type};
  std::vector<IntMatrix> parts;
  pav::PolarizationType types;
  for (size_t k = 0; k < t.children.size(); ++k) {
    AssembledIsogeny sub = assemble(t.children[k]);
    parts.push_back(t.embeddings[k].p * sub.p);
    for (const auto& d : sub.types.d) types.d.push_back(d * t.children[k].node.content);
  }
  return {interleave(parts[0], parts[1]), types};
}

}  // namespace abvar::decompose
