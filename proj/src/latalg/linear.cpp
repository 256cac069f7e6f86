#include "abvar/latalg/linear.hpp"

#include "abvar/latalg/lll.hpp"

#include <algorithm>

namespace abvar::latalg {

RatMatrix to_rational(const IntMatrix& m) {
  return m.map([](const Integer& x) { return Rational(x); });
}

IntMatrix to_integer(const RatMatrix& m) {
  return m.map([](const Rational& x) {
    if (x.get_den() != 1) throw Error(ErrorKind::NonIntegral, "entry " + to_string(x) + " is not an integer");
    return Integer(x.get_num());
  });
}

bool is_integral(const RatMatrix& m) {
  for (const auto& x : m.data())
    if (x.get_den() != 1) return false;
  return true;
}

Integer common_denominator(const RatMatrix& m) {
  Integer l = 1;
  for (const auto& x : m.data()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

Integer determinant(const IntMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
  size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Rational determinant(const RatMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
  IntMatrix a(m.rows(), m.cols());
  Rational scale = 1;
  for (size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (size_t j = 0; j < m.cols(); ++j) {
      Rational v = m(i, j) * l;
      a(i, j) = v.get_num();
    }
    scale /= l;
  }
  return scale * Rational(determinant(a));
}

RowEchelon rref(const RatMatrix& m) {
  RowEchelon out{m, {}};
  RatMatrix& a = out.reduced;
  size_t r = 0;
  for (size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    Rational inv = 1 / a(r, c);
    for (size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  return out;
}

size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }
size_t rank(const IntMatrix& m) { return rank(to_rational(m)); }

RatMatrix kernel(const RatMatrix& m) {
  RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t c : e.pivots) is_pivot[c] = true;
  std::vector<size_t> free;
  for (size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  RatMatrix k(m.cols(), free.size());
  for (size_t t = 0; t < free.size(); ++t) {
    k(free[t], t) = 1;
    for (size_t r = 0; r < e.pivots.size(); ++r) k(e.pivots[r], t) = -e.reduced(r, free[t]);
  }
  return k;
}

SolveResult solve_exact(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::InvalidArgument, "solve_exact row mismatch");
  RowEchelon e = rref(hstack(a, b));
  SolveResult res;
  for (size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= a.cols()) {
      // inconsistent: find y in the left kernel of A with y*B != 0
      RatMatrix left = kernel(a.transpose());
      for (size_t t = 0; t < left.cols(); ++t) {
        std::vector<Rational> y = left.col(t);
        for (size_t j = 0; j < b.cols(); ++j) {
          Rational s = 0;
          for (size_t i = 0; i < b.rows(); ++i) s += y[i] * b(i, j);
          if (s != 0) {
            res.certificate = y;
            return res;
          }
        }
      }
      return res;
    }
  }
  res.consistent = true;
  res.x = RatMatrix(a.cols(), b.cols());
  for (size_t r = 0; r < e.pivots.size(); ++r)
    for (size_t j = 0; j < b.cols(); ++j) res.x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  return res;
}

RatMatrix solve_or_throw(const RatMatrix& a, const RatMatrix& b) {
  SolveResult r = solve_exact(a, b);
  if (!r.consistent) throw Error(ErrorKind::Inconsistent, "linear system has no solution");
  return r.x;
}

RatMatrix inverse(const RatMatrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::InvalidArgument, "inverse of non-square matrix");
  RowEchelon e = rref(hstack(m, RatMatrix::identity(m.rows())));
  if (e.pivots.size() < m.rows() || e.pivots[m.rows() - 1] >= m.cols())
    throw Error(ErrorKind::InvalidArgument, "matrix is singular");
  return e.reduced.block(0, m.cols(), m.rows(), m.cols());
}

namespace {

// row_a <- s*row_a + t*row_b ; row_b <- u*row_a_old + v*row_b (on both H and U)
void combine_rows(IntMatrix& h, IntMatrix& u, size_t a, size_t b, const Integer& s, const Integer& t,
                  const Integer& x, const Integer& y) {
  for (IntMatrix* m : {&h, &u}) {
    for (size_t j = 0; j < m->cols(); ++j) {
      Integer ra = (*m)(a, j), rb = (*m)(b, j);
      (*m)(a, j) = s * ra + t * rb;
      (*m)(b, j) = x * ra + y * rb;
    }
  }
}

void add_row(IntMatrix& m, size_t target, size_t source, const Integer& c) {
  for (size_t j = 0; j < m.cols(); ++j) m(target, j) += c * m(source, j);
}

}  // namespace

HermiteResult hermite_form(const IntMatrix& m) {
  HermiteResult res{m, IntMatrix::identity(m.rows()), 0};
  IntMatrix& h = res.h;
  IntMatrix& u = res.u;
  size_t r = 0;
  for (size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        h.swap_rows(r, i);
        u.swap_rows(r, i);
        continue;
      }
      Integer a = h(r, c), b = h(i, c), g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer x = -b / g, y = a / g;
      combine_rows(h, u, r, i, s, t, x, y);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      for (size_t j = 0; j < h.cols(); ++j) h(r, j) = -h(r, j);
      for (size_t j = 0; j < u.cols(); ++j) u(r, j) = -u(r, j);
    }
    for (size_t i = 0; i < r; ++i) {
      Integer q = floor_div(h(i, c), h(r, c));
      if (q == 0) continue;
      add_row(h, i, r, -q);
      add_row(u, i, r, -q);
    }
    ++r;
  }
  res.rank = r;
  return res;
}

std::vector<Integer> elementary_divisors(const IntMatrix& m) {
  IntMatrix a = m;
  size_t n = std::min(a.rows(), a.cols());
  std::vector<Integer> d;
  for (size_t t = 0; t < n; ++t) {
    for (;;) {
      // move the smallest nonzero entry of the trailing block to (t, t)
      size_t bi = a.rows(), bj = 0;
      for (size_t i = t; i < a.rows(); ++i)
        for (size_t j = t; j < a.cols(); ++j)
          if (a(i, j) != 0 && (bi == a.rows() || abs(a(i, j)) < abs(a(bi, bj)))) bi = i, bj = j;
      if (bi == a.rows()) {
        d.resize(n, Integer(0));
        return d;
      }
      a.swap_rows(t, bi);
      a.swap_cols(t, bj);
      bool clean = true;
      for (size_t i = t + 1; i < a.rows(); ++i) {
        Integer q = floor_div(a(i, t), a(t, t));
        if (q != 0) add_row(a, i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (size_t j = t + 1; j < a.cols(); ++j) {
        Integer q = floor_div(a(t, j), a(t, t));
        if (q != 0)
          for (size_t i = 0; i < a.rows(); ++i) a(i, j) -= q * a(i, t);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      bool divisible = true;
      for (size_t i = t + 1; i < a.rows() && divisible; ++i)
        for (size_t j = t + 1; j < a.cols(); ++j)
          if (a(i, j) % a(t, t) != 0) {
            add_row(a, t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    d.push_back(abs(a(t, t)));
  }
  return d;
}

IntMatrix integer_kernel(const IntMatrix& m) {
  HermiteResult h = hermite_form(m.transpose());
  size_t n = m.cols();
  IntRows rows;
  for (size_t i = h.rank; i < n; ++i) rows.push_back(h.u.row(i));
  if (rows.size() > 1) lll_reduce(rows);
  IntMatrix k(n, rows.size());
  for (size_t t = 0; t < rows.size(); ++t) k.set_col(t, rows[t]);
  return k;
}

IntMatrix lattice_hermite_basis(const IntMatrix& cols) {
  HermiteResult h = hermite_form(cols.transpose());
  IntMatrix b(cols.rows(), h.rank);
  for (size_t t = 0; t < h.rank; ++t) b.set_col(t, h.h.row(t));
  return b;
}

bool lattice_contains(const IntMatrix& outer, const IntMatrix& inner) {
  IntMatrix basis = lattice_hermite_basis(outer);
  SolveResult r = solve_exact(to_rational(basis), to_rational(inner));
  return r.consistent && is_integral(r.x);
}

IntMatrix saturate(const RatMatrix& cols, long expected_rank) {
  size_t n = cols.rows();
  IntMatrix c(n, cols.cols());
  for (size_t j = 0; j < cols.cols(); ++j) {
    Integer l = 1;
    for (size_t i = 0; i < n; ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), cols(i, j).get_den_mpz_t());
    for (size_t i = 0; i < n; ++i) c(i, j) = Rational(cols(i, j) * l).get_num();
  }
  size_t r = rank(c);
  if (expected_rank >= 0 && static_cast<size_t>(expected_rank) != r)
    throw Error(ErrorKind::RankMismatch,
                "declared rank " + std::to_string(expected_rank) + " but columns have rank " + std::to_string(r));
  if (r == 0) return IntMatrix(n, 0);
  if (r == n) return IntMatrix::identity(n);
  IntMatrix annihilator = integer_kernel(c.transpose());
  return lattice_hermite_basis(integer_kernel(annihilator.transpose()));
}

namespace {

struct GramState {
  IntMatrix g;  // Gram matrix of the current vectors
  IntMatrix t;  // current vectors as columns, in coordinates of the input basis

  // v_k <- v_k + c v_l
  void add(size_t k, size_t l, const Integer& c) {
    if (c == 0) return;
    for (size_t i = 0; i < t.rows(); ++i) t(i, k) += c * t(i, l);
    for (size_t j = 0; j < g.cols(); ++j) g(k, j) += c * g(l, j);
    for (size_t i = 0; i < g.rows(); ++i) g(i, k) += c * g(i, l);
  }
  void negate(size_t k) {
    for (size_t i = 0; i < t.rows(); ++i) t(i, k) = -t(i, k);
    for (size_t j = 0; j < g.cols(); ++j) g(k, j) = -g(k, j);
    for (size_t i = 0; i < g.rows(); ++i) g(i, k) = -g(i, k);
  }
};

}  // namespace

SymplecticBasis frobenius_symplectic_basis(const IntMatrix& basis, const IntMatrix& j) {
  if (j.rows() != basis.rows() || !j.is_square())
    throw Error(ErrorKind::InvalidArgument, "form and basis shapes do not conform");
  if (!is_alternating(j)) throw Error(ErrorKind::InvalidArgument, "form is not alternating");
  size_t k = basis.cols();
  if (k % 2 != 0) throw Error(ErrorKind::DegenerateForm, "odd number of basis vectors");
  GramState st{basis.transpose() * j * basis, IntMatrix::identity(k)};

  std::vector<size_t> active(k);
  for (size_t i = 0; i < k; ++i) active[i] = i;
  std::vector<size_t> firsts, seconds;
  std::vector<Integer> d;

  while (!active.empty()) {
    size_t e = k, f = k;
    for (size_t a = 0; a < active.size(); ++a)
      for (size_t b = a + 1; b < active.size(); ++b) {
        const Integer& v = st.g(active[a], active[b]);
        if (v != 0 && (e == k || abs(v) < abs(st.g(e, f)))) e = active[a], f = active[b];
      }
    if (e == k) throw Error(ErrorKind::DegenerateForm, "restricted form is singular");
    if (st.g(e, f) < 0) st.negate(f);
    Integer m = st.g(e, f);

    bool restart = false;
    for (size_t idx : active) {
      if (idx == e || idx == f) continue;
      st.add(idx, f, -floor_div(st.g(e, idx), m));
      st.add(idx, e, floor_div(st.g(f, idx), m));
      if (st.g(e, idx) != 0 || st.g(f, idx) != 0) restart = true;
    }
    if (restart) continue;

    for (size_t a = 0; a < active.size() && !restart; ++a)
      for (size_t b = a + 1; b < active.size(); ++b) {
        size_t p = active[a], q = active[b];
        if (p == e || p == f || q == e || q == f) continue;
        if (st.g(p, q) % m != 0) {
          st.add(e, p, 1);
          restart = true;
          break;
        }
      }
    if (restart) continue;

    firsts.push_back(e);
    seconds.push_back(f);
    d.push_back(m);
    active.erase(std::remove_if(active.begin(), active.end(), [&](size_t x) { return x == e || x == f; }),
                 active.end());
  }

  std::vector<size_t> order = firsts;
  order.insert(order.end(), seconds.begin(), seconds.end());
  SymplecticBasis out;
  out.transform = st.t.columns(order);
  out.s = basis * out.transform;
  out.d = d;
  return out;
}

IntMatrix alternating_standard(const std::vector<Integer>& d) {
  size_t h = d.size();
  IntMatrix m(2 * h, 2 * h);
  for (size_t i = 0; i < h; ++i) {
    m(i, h + i) = d[i];
    m(h + i, i) = -d[i];
  }
  return m;
}

bool is_alternating(const IntMatrix& m) {
  if (!m.is_square()) return false;
  for (size_t i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0) return false;
    for (size_t j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != -m(j, i)) return false;
  }
  return true;
}

}  // namespace abvar::latalg
