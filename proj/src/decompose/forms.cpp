#include "abvar/decompose/decompose.hpp"
#include "abvar/latalg/lll.hpp"

#include <bit>
#include <sstream>

namespace abvar::decompose {

size_t pair_count(size_t n) { return n * (n - 1) / 2; }

size_t pair_index(size_t n, size_t i, size_t j) {
  if (!(i < j && j < n)) throw Error(ErrorKind::InvalidArgument, "pair index out of range");
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

NSForm make_form(size_t g, std::vector<Rational> a) {
  if (a.size() != pair_count(2 * g))
    throw Error(ErrorKind::InvalidArgument,
                "expected " + std::to_string(pair_count(2 * g)) + " coefficients, got " + std::to_string(a.size()));
  return NSForm{g, std::move(a)};
}

RatMatrix NSForm::e_omega() const {
  size_t n = 2 * g;
  RatMatrix e(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      e(i, j) = -coeff(i, j);
      e(j, i) = coeff(i, j);
    }
  return e;
}

NSForm form_from_matrix(const RatMatrix& e) {
  size_t n = e.rows();
  if (n != e.cols() || n % 2 != 0) throw Error(ErrorKind::InvalidArgument, "form matrix must be square of even size");
  if (e.transpose() != -e) throw Error(ErrorKind::InvalidArgument, "form matrix is not alternating");
  std::vector<Rational> a;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) a.push_back(-e(i, j));
  return NSForm{n / 2, std::move(a)};
}

std::string NSForm::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t k = 0; k < a.size(); ++k) os << (k ? ", " : "") << abvar::to_string(a[k]);
  os << ")";
  return os.str();
}

namespace {

// sign of moving one factor m into the sorted product `mask` from the right
int insertion_sign(std::uint32_t mask, size_t m) {
  std::uint32_t above = mask & ~((std::uint32_t(2) << m) - 1);
  return std::popcount(above) % 2 ? -1 : 1;
}

int count_below(std::uint32_t mask, size_t m) { return std::popcount(mask & ((std::uint32_t(1) << m) - 1)); }

void accumulate(ExteriorForm& f, std::uint32_t mask, const ExactComplex& v) {
  auto it = f.find(mask);
  if (it == f.end()) f.emplace(mask, v);
  else it->second += v;
}

void drop_zeros(ExteriorForm& f) {
  for (auto it = f.begin(); it != f.end();) {
    if (it->second.is_exact() && it->second.is_zero()) it = f.erase(it);
    else ++it;
  }
}

}  // namespace

ExteriorForm holomorphic_volume(const CMatrix& period) {
  size_t g = period.rows(), n = period.cols();
  if (n != 2 * g || n > 32) throw Error(ErrorKind::InvalidArgument, "period matrix must be g x 2g with g <= 16");
  ExteriorForm acc{{0u, ExactComplex(1L)}};
  for (size_t k = 0; k < g; ++k) {
    ExteriorForm next;
    for (const auto& [mask, v] : acc)
      for (size_t m = 0; m < n; ++m) {
        if (mask & (1u << m)) continue;
        const ExactComplex& c = period(k, m);
        if (c.is_exact() && c.is_zero()) continue;
        ExactComplex t = v * c;
        if (insertion_sign(mask, m) < 0) t = -t;
        accumulate(next, mask | (1u << m), t);
      }
    drop_zeros(next);
    acc = std::move(next);
  }
  return acc;
}

ExteriorForm wedge_two_form(const std::vector<ExactComplex>& a, const ExteriorForm& vol, size_t n) {
  if (a.size() != pair_count(n)) throw Error(ErrorKind::InvalidArgument, "coefficient count mismatch");
  ExteriorForm out;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const ExactComplex& c = a[pair_index(n, i, j)];
      if (c.is_exact() && c.is_zero()) continue;
      for (const auto& [mask, v] : vol) {
        if (mask & ((1u << i) | (1u << j))) continue;
        ExactComplex t = c * v;
        if ((count_below(mask, i) + count_below(mask, j)) % 2) t = -t;
        accumulate(out, mask | (1u << i) | (1u << j), t);
      }
    }
  drop_zeros(out);
  return out;
}

NSMembership ns_membership(const pav::PolarizedAV& a, const std::vector<Rational>& coeffs) {
  size_t n = 2 * a.g();
  std::vector<ExactComplex> c(coeffs.begin(), coeffs.end());
  ExteriorForm vol = holomorphic_volume(a.period());
  NSMembership out;
  out.defect = wedge_two_form(c, vol, n);
  out.exact = a.exact();
  Precision p = a.precision;
  out.max_defect = Real(0L, p);
  for (const auto& [mask, v] : out.defect) out.max_defect = max(out.max_defect, abs(eval_numeric(v, p)));
  if (out.exact) {
    out.member = out.defect.empty();
  } else {
    Real scale(1L, p);
    for (const auto& q : coeffs) scale = max(scale, abs(Real(q, p)));
    for (const auto& [mask, v] : vol) scale = max(scale, abs(eval_numeric(v, p)));
    out.member = out.max_defect <= float_tolerance(p) * scale;
  }
  return out;
}

namespace {

std::optional<FieldPtr> common_field(const std::vector<const NumberFieldElement*>& xs) {
  FieldPtr target;
  NumberFieldElement rep;
  for (const auto* x : xs) {
    if (x->is_rational()) continue;
    if (!target) {
      target = x->field();
      rep = *x;
      continue;
    }
    if (embed_into(*x, target)) continue;
    auto u = unify_fields(rep, *x);
    if (!u) return std::nullopt;
    rep = u->first;
    target = rep.field();
    if (!target) return std::nullopt;
  }
  for (const auto* x : xs)
    if (!x->is_rational() && !embed_into(*x, target)) return std::nullopt;
  return target;
}

std::vector<Rational> field_coordinates(const NumberFieldElement& x, const FieldPtr& field) {
  size_t deg = field ? static_cast<size_t>(field->degree()) : 1;
  std::vector<Rational> out(deg, Rational(0));
  if (x.is_rational()) {
    out[0] = x.rational_value();
    return out;
  }
  NumberFieldElement y = *embed_into(x, field);
  for (size_t k = 0; k < y.coeffs().size() && k < deg; ++k) out[k] = y.coeffs()[k];
  return out;
}

std::string describe(const FieldPtr& f) {
  if (!f) return "Q";
  return "Q(theta), theta root of " + to_string(f->poly()) + " near " + f->root_text();
}

// Rational span of the integer relations among the columns of a real matrix, found by LLL.
std::vector<std::vector<Integer>> column_relations(const std::vector<std::vector<Real>>& rows, size_t cols,
                                                   Precision prec) {
  Precision work = prec + 32;
  // row basis by elimination with a relative pivot threshold
  std::vector<std::vector<Real>> m = rows;
  Real scale(0L, work);
  for (const auto& r : m)
    for (const auto& v : r) scale = max(scale, abs(v));
  std::vector<std::vector<Real>> basis;
  if (!scale.is_zero()) {
    Real threshold = scale * pow2(-prec / 2, work);
    std::vector<bool> used(m.size(), false);
    for (size_t c = 0; c < cols; ++c) {
      size_t piv = m.size();
      for (size_t i = 0; i < m.size(); ++i)
        if (!used[i] && (piv == m.size() || abs(m[i][c]) > abs(m[piv][c]))) piv = i;
      if (piv == m.size() || abs(m[piv][c]) <= threshold) continue;
      used[piv] = true;
      for (size_t i = 0; i < m.size(); ++i) {
        if (used[i]) continue;
        Real f = m[i][c] / m[piv][c];
        for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[piv][j];
      }
      // normalize the stored row
      Real mx(0L, work);
      for (const auto& v : m[piv]) mx = max(mx, abs(v));
      std::vector<Real> r = m[piv];
      for (auto& v : r) v /= mx;
      basis.push_back(std::move(r));
    }
  }
  size_t rank = basis.size();
  std::vector<std::vector<Integer>> relations;
  if (rank == 0) {
    for (size_t k = 0; k < cols; ++k) {
      std::vector<Integer> e(cols, Integer(0));
      e[k] = 1;
      relations.push_back(e);
    }
    return relations;
  }
  if (rank == cols) return relations;
  Real s = pow2(prec - 8, work);
  latalg::IntRows lat(cols, std::vector<Integer>(cols + rank));
  for (size_t k = 0; k < cols; ++k) {
    lat[k][k] = 1;
    for (size_t r = 0; r < rank; ++r) lat[k][cols + r] = (basis[r][k] * s).round();
  }
  latalg::lll_reduce(lat);
  long budget_bits = (prec - 8) * static_cast<long>(rank) / static_cast<long>(cols) - 20;
  if (budget_bits < 4) return relations;
  Integer budget = Integer(1) << static_cast<mp_bitcnt_t>(budget_bits);
  for (const auto& row : lat) {
    Integer h = 0;
    for (size_t k = 0; k < cols; ++k) h = std::max(h, Integer(abs(row[k])));
    if (h == 0 || h > budget) continue;
    Real tol = Real(h, work) * Real(static_cast<long>(cols), work) * pow2(-prec / 2, work);
    bool ok = true;
    for (size_t r = 0; r < rank && ok; ++r) {
      Real acc(0L, work);
      for (size_t k = 0; k < cols; ++k) acc += basis[r][k] * Real(row[k], work);
      if (abs(acc) > tol) ok = false;
    }
    if (ok) relations.emplace_back(row.begin(), row.begin() + static_cast<long>(cols));
  }
  return relations;
}

}  // namespace

SeparatedSystem separate(const std::vector<std::vector<ExactComplex>>& equations, size_t unknowns, Precision prec) {
  size_t cols = unknowns + 1;
  for (const auto& e : equations)
    if (e.size() != cols) throw Error(ErrorKind::InvalidArgument, "equation length mismatch");
  SeparatedSystem out;
  bool all_exact = true;
  std::vector<const NumberFieldElement*> xs;
  for (const auto& e : equations)
    for (const auto& c : e) {
      if (!c.is_exact()) all_exact = false;
      else xs.push_back(&c.exact());
    }
  std::optional<FieldPtr> field;
  if (all_exact) field = common_field(xs);
  if (field) {
    size_t deg = *field ? static_cast<size_t>((*field)->degree()) : 1;
    std::vector<std::vector<Rational>> rows;
    for (const auto& e : equations) {
      std::vector<std::vector<Rational>> block(deg, std::vector<Rational>(cols));
      for (size_t k = 0; k < cols; ++k) {
        auto coords = field_coordinates(e[k].exact(), *field);
        for (size_t b = 0; b < deg; ++b) block[b][k] = coords[b];
      }
      for (auto& r : block) {
        bool zero = std::all_of(r.begin(), r.end(), [](const Rational& q) { return q == 0; });
        if (!zero) rows.push_back(std::move(r));
      }
    }
    out.rows = RatMatrix(rows.size(), cols);
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t k = 0; k < cols; ++k) out.rows(i, k) = rows[i][k];
    out.exact = true;
    out.field = describe(*field);
    return out;
  }

  out.exact = false;
  out.field = "float";
  Precision work = prec + 32;
  std::vector<std::vector<Real>> real_rows;
  for (const auto& e : equations) {
    std::vector<Real> re, im;
    for (const auto& c : e) {
      Complex z = eval_numeric(c, work);
      re.push_back(z.re);
      im.push_back(z.im);
    }
    real_rows.push_back(std::move(re));
    real_rows.push_back(std::move(im));
  }
  auto rel = column_relations(real_rows, cols, prec);
  RatMatrix span(rel.size(), cols);
  for (size_t i = 0; i < rel.size(); ++i)
    for (size_t k = 0; k < cols; ++k) span(i, k) = Rational(rel[i][k]);
  // constraints: the orthogonal complement of the relation span
  RatMatrix comp = rel.empty() ? RatMatrix::identity(cols) : latalg::kernel(span).transpose();
  out.rows = comp;
  return out;
}

AffineSpace solve_affine(const RatMatrix& rows) {
  size_t n = rows.cols() - 1;
  AffineSpace out;
  latalg::RowEchelon re = latalg::rref(rows);
  std::vector<bool> pivot(n + 1, false);
  for (size_t p : re.pivots) pivot[p] = true;
  if (pivot[n]) return out;
  out.consistent = true;
  out.particular.assign(n, Rational(0));
  for (size_t r = 0; r < re.pivots.size(); ++r) out.particular[re.pivots[r]] = -re.reduced(r, n);
  for (size_t c = 0; c < n; ++c)
    if (!pivot[c]) out.free.push_back(c);
  out.directions = RatMatrix(n, out.free.size());
  for (size_t t = 0; t < out.free.size(); ++t) {
    size_t f = out.free[t];
    out.directions(f, t) = 1;
    for (size_t r = 0; r < re.pivots.size(); ++r) out.directions(re.pivots[r], t) = -re.reduced(r, f);
  }
  return out;
}

NSKernel ns_kernel(const pav::PolarizedAV& a) {
  size_t n = 2 * a.g();
  size_t unknowns = pair_count(n);
  ExteriorForm vol = holomorphic_volume(a.period());
  std::map<std::uint32_t, std::vector<ExactComplex>> eqs;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (const auto& [mask, v] : vol) {
        if (mask & ((1u << i) | (1u << j))) continue;
        auto& row = eqs.try_emplace(mask | (1u << i) | (1u << j), std::vector<ExactComplex>(unknowns + 1)).first->second;
        ExactComplex t = v;
        if ((count_below(mask, i) + count_below(mask, j)) % 2) t = -t;
        row[pair_index(n, i, j)] += t;
      }
  std::vector<std::vector<ExactComplex>> list;
  for (auto& [mask, row] : eqs) list.push_back(std::move(row));
  SeparatedSystem sys = separate(list, unknowns, a.precision);
  AffineSpace sp = solve_affine(sys.rows);
  NSKernel out;
  out.exact = sys.exact;
  out.basis = sp.consistent ? sp.directions : RatMatrix(unknowns, 0);
  return out;
}

}  // namespace abvar::decompose
