#include "abvar/gaction/gaction.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace abvar::gaction {

using pav::PolarizationType;

void validate(const SymplecticRep& rep) {
  IntMatrix j = pav::polarization_form(rep.e);
  auto check = [&](const IntMatrix& n, const char* what, size_t idx) {
    if (n.rows() != j.rows() || n.cols() != j.cols())
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " " + std::to_string(idx) + " has shape " + n.shape());
    if (n.transpose() * j * n != j)
      throw Error(ErrorKind::NotSymplectic, std::string(what) + " " + std::to_string(idx) + " does not preserve J_E");
  };
  for (size_t i = 0; i < rep.generators.size(); ++i) check(rep.generators[i], "generator", i);
  for (size_t i = 0; i < rep.elements.size(); ++i) check(rep.elements[i], "element", i);
}

RatMatrix subgroup_idempotent(const std::vector<IntMatrix>& elements) {
  if (elements.empty()) throw Error(ErrorKind::InvalidArgument, "empty element list");
  size_t n = elements.front().rows();
  std::set<std::vector<Integer>> keys;
  for (const auto& e : elements) {
    if (e.rows() != n || e.cols() != n) throw Error(ErrorKind::InvalidArgument, "elements differ in shape");
    keys.insert(e.data());
  }
  if (keys.size() != elements.size()) throw Error(ErrorKind::InvalidArgument, "element list has repeats");
  for (const auto& a : elements)
    for (const auto& b : elements)
      if (!keys.count((a * b).data())) throw Error(ErrorKind::NotClosed, "element list is not closed under products");
  IntMatrix sum(n, n);
  for (const auto& e : elements) sum += e;
  RatMatrix p = make_rational(1, static_cast<long>(elements.size())) * latalg::to_rational(sum);
  if (p * p != p) throw Error(ErrorKind::NotIdempotent, "group average is not idempotent");
  return p;
}

RestrictedRep restrict_action(const SymplecticRep& rep, const IntMatrix& p, const PolarizationType& d) {
  validate(rep);
  size_t h = d.g();
  if (p.rows() != 2 * rep.g() || p.cols() != 2 * h)
    throw Error(ErrorKind::InvalidArgument, "embedding has shape " + p.shape());
  if (latalg::rank(p) != 2 * h) throw Error(ErrorKind::InvalidArgument, "embedding columns are dependent");
  IntMatrix jd = latalg::alternating_standard(d.d);
  IntMatrix pulled = p.transpose() * pav::polarization_form(rep.e) * p;
  // allow the primitive rescale: P^t J_E P = c J_D
  Integer c = pulled(0, h) / d.d[0];
  if (c <= 0 || pulled != c * jd)
    throw Error(ErrorKind::InvalidArgument, "embedding does not pull J_E back to a multiple of J_D");

  RestrictedRep out{d, p, {}};
  RatMatrix pr = latalg::to_rational(p);
  for (size_t k = 0; k < rep.generators.size(); ++k) {
    latalg::SolveResult s = latalg::solve_exact(pr, latalg::to_rational(rep.generators[k] * p));
    if (!s.consistent || !latalg::is_integral(s.x))
      throw Error(ErrorKind::NotStable, "sublattice is not stable under generator " + std::to_string(k));
    IntMatrix x = latalg::to_integer(s.x);
    if (x.transpose() * jd * x != jd)
      throw Error(ErrorKind::NotSymplectic, "restricted generator " + std::to_string(k) + " is not in Sp^D");
    out.generators.push_back(x);
  }
  return out;
}

namespace {

struct Blocks {
  RatMatrix a_scaled;  // D a D^-1
  RatMatrix c_scaled;  // c D^-1
  RatMatrix d;         // d
  RatMatrix b_scaled;  // D b
};

Blocks split(const IntMatrix& n, const PolarizationType& type) {
  size_t h = type.g();
  RatMatrix dm(h, h), dinv(h, h);
  for (size_t i = 0; i < h; ++i) {
    dm(i, i) = Rational(type.d[i]);
    dinv(i, i) = make_rational(1, type.d[i]);
  }
  RatMatrix r = latalg::to_rational(n);
  return {dm * r.block(0, 0, h, h) * dinv, r.block(h, 0, h, h) * dinv, r.block(h, h, h, h), dm * r.block(0, h, h, h)};
}

// Dense complex matrix for the numeric solver.
struct NumMat {
  size_t r = 0, c = 0;
  std::vector<Complex> a;
  NumMat(size_t rows, size_t cols, Precision p) : r(rows), c(cols), a(rows * cols, Complex(p)) {}
  Complex& operator()(size_t i, size_t j) { return a[i * c + j]; }
  const Complex& operator()(size_t i, size_t j) const { return a[i * c + j]; }
};

NumMat num(const RatMatrix& m, Precision p) {
  NumMat out(m.rows(), m.cols(), p);
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out(i, j) = Complex(m(i, j), p);
  return out;
}

NumMat mul(const NumMat& x, const NumMat& y, Precision p) {
  NumMat out(x.r, y.c, p);
  for (size_t i = 0; i < x.r; ++i)
    for (size_t k = 0; k < x.c; ++k) {
      if (x(i, k).re.is_zero() && x(i, k).im.is_zero()) continue;
      for (size_t j = 0; j < y.c; ++j) out(i, j) += x(i, k) * y(k, j);
    }
  return out;
}

NumMat add(NumMat x, const NumMat& y, int sign = 1) {
  for (size_t k = 0; k < x.a.size(); ++k) {
    if (sign > 0) x.a[k] += y.a[k];
    else x.a[k] -= y.a[k];
  }
  return x;
}

struct NumBlocks {
  NumMat a, c, d, b;
};

class FixedPointSystem {
 public:
  FixedPointSystem(const RestrictedRep& rep, Precision prec) : h_(rep.h()), prec_(prec) {
    for (size_t a = 0; a < h_; ++a)
      for (size_t b = a; b < h_; ++b) unknowns_.emplace_back(a, b);
    for (const auto& g : rep.generators) {
      Blocks bl = split(g, rep.d);
      blocks_.push_back({num(bl.a_scaled, prec), num(bl.c_scaled, prec), num(bl.d, prec), num(bl.b_scaled, prec)});
    }
  }

  size_t unknowns() const { return unknowns_.size(); }
  size_t equations() const { return blocks_.size() * h_ * h_; }

  NumMat to_matrix(const std::vector<Complex>& x) const {
    NumMat z(h_, h_, prec_);
    for (size_t t = 0; t < unknowns_.size(); ++t) {
      auto [a, b] = unknowns_[t];
      z(a, b) = x[t];
      z(b, a) = x[t];
    }
    return z;
  }

  std::vector<Complex> residual(const std::vector<Complex>& x) const {
    NumMat z = to_matrix(x);
    std::vector<Complex> out;
    for (const auto& bl : blocks_) {
      NumMat f = add(add(mul(mul(z, bl.c, prec_), z, prec_), mul(bl.a, z, prec_)), mul(z, bl.d, prec_), -1);
      f = add(f, bl.b, -1);
      out.insert(out.end(), f.a.begin(), f.a.end());
    }
    return out;
  }

  NumMat jacobian(const std::vector<Complex>& x) const {
    NumMat z = to_matrix(x);
    NumMat jac(equations(), unknowns(), prec_);
    for (size_t t = 0; t < unknowns_.size(); ++t) {
      NumMat e(h_, h_, prec_);
      auto [a, b] = unknowns_[t];
      e(a, b) = Complex(Rational(1), prec_);
      e(b, a) = Complex(Rational(1), prec_);
      size_t row = 0;
      for (const auto& bl : blocks_) {
        NumMat zc = mul(z, bl.c, prec_);
        NumMat df = add(add(mul(mul(e, bl.c, prec_), z, prec_), mul(zc, e, prec_)), mul(bl.a, e, prec_));
        df = add(df, mul(e, bl.d, prec_), -1);
        for (const auto& v : df.a) jac(row++, t) = v;
      }
    }
    return jac;
  }

 private:
  size_t h_;
  Precision prec_;
  std::vector<std::pair<size_t, size_t>> unknowns_;
  std::vector<NumBlocks> blocks_;
};

Real norm2(const std::vector<Complex>& v, Precision p) {
  Real s(0L, p);
  for (const auto& x : v) s += norm(x);
  return sqrt(s);
}

// Solves the square system m x = rhs by partial pivoting; nullopt when singular.
std::optional<std::vector<Complex>> solve_square(NumMat m, std::vector<Complex> rhs, Precision p) {
  size_t n = m.r;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t i = c + 1; i < n; ++i)
      if (norm(m(i, c)) > norm(m(piv, c))) piv = i;
    if (m(piv, c).re.is_zero() && m(piv, c).im.is_zero()) return std::nullopt;
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      std::swap(rhs[piv], rhs[c]);
    }
    for (size_t i = c + 1; i < n; ++i) {
      Complex f = m(i, c) / m(c, c);
      for (size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
      rhs[i] -= f * rhs[c];
    }
  }
  std::vector<Complex> x(n, Complex(p));
  for (size_t i = n; i-- > 0;) {
    Complex s = rhs[i];
    for (size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return x;
}

// Levenberg-Marquardt with damping proportional to the residual norm.
std::optional<std::vector<Complex>> converge(const FixedPointSystem& sys, std::vector<Complex> x, Precision p,
                                             int max_iter, const Real& target) {
  std::vector<Complex> f = sys.residual(x);
  Real fn = norm2(f, p);
  Real mu(1L, p);
  int stalls = 0;
  for (int it = 0; it < max_iter && fn > target; ++it) {
    NumMat jac = sys.jacobian(x);
    size_t n = sys.unknowns();
    NumMat normal(n, n, p);
    std::vector<Complex> grad(n, Complex(p));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        Complex s(p);
        for (size_t r = 0; r < jac.r; ++r) s += conj(jac(r, i)) * jac(r, j);
        normal(i, j) = s;
      }
      Complex s(p);
      for (size_t r = 0; r < jac.r; ++r) s += conj(jac(r, i)) * f[r];
      grad[i] = -s;
    }
    Real lambda = mu * fn;
    for (size_t i = 0; i < n; ++i) normal(i, i).re += lambda;
    auto step = solve_square(normal, grad, p);
    if (!step) return std::nullopt;
    std::vector<Complex> trial = x;
    for (size_t i = 0; i < n; ++i) trial[i] += (*step)[i];
    std::vector<Complex> ft = sys.residual(trial);
    Real ftn = norm2(ft, p);
    if (ftn < fn) {
      x = std::move(trial);
      f = std::move(ft);
      fn = ftn;
      mu = max(mu * Real(0.25, p), pow2(-40, p));
      stalls = 0;
    } else {
      mu *= Real(8L, p);
      if (++stalls > 30) break;
    }
    for (const auto& v : x)
      if (abs(v) > Real(1e8, p)) return std::nullopt;
  }
  return x;
}

size_t numeric_rank(const NumMat& m, Precision p) {
  NumMat a = m;
  Real scale(0L, p);
  for (const auto& v : a.a) scale = max(scale, abs(v));
  if (scale.is_zero()) return 0;
  Real threshold = scale * pow2(-p / 4, p);
  size_t rank = 0;
  std::vector<bool> used(a.r, false);
  for (size_t c = 0; c < a.c; ++c) {
    size_t piv = a.r;
    for (size_t i = 0; i < a.r; ++i)
      if (!used[i] && (piv == a.r || norm(a(i, c)) > norm(a(piv, c)))) piv = i;
    if (piv == a.r || abs(a(piv, c)) <= threshold) continue;
    used[piv] = true;
    ++rank;
    for (size_t i = 0; i < a.r; ++i) {
      if (used[i]) continue;
      Complex f = a(i, c) / a(piv, c);
      for (size_t j = c; j < a.c; ++j) a(i, j) -= f * a(piv, j);
    }
  }
  return rank;
}

std::string rational_matrix_text(const RatMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << to_string(m(i, j));
    os << "]";
  }
  os << "]";
  return os.str();
}

bool lex_less(const CMatrix& x, const CMatrix& y, Precision p) {
  for (size_t k = 0; k < x.data().size(); ++k) {
    Complex a = eval_numeric(x.data()[k], p), b = eval_numeric(y.data()[k], p);
    if (a.re != b.re) return a.re < b.re;
    if (a.im != b.im) return a.im < b.im;
  }
  return false;
}

}  // namespace

CMatrix fixed_point_residual(const IntMatrix& n, const PolarizationType& d, const CMatrix& z) {
  Blocks bl = split(n, d);
  return z * to_complex(bl.c_scaled) * z + to_complex(bl.a_scaled) * z - z * to_complex(bl.d) -
         to_complex(bl.b_scaled);
}

FixedRiemannResult fixed_riemann(const RestrictedRep& rep, const FixedRiemannOptions& opts) {
  size_t h = rep.h();
  if (h == 0) throw Error(ErrorKind::InvalidArgument, "empty restricted representation");
  if (h > 6) throw Error(ErrorKind::SizeGate, "fixed-point solving is limited to h <= 6");
  if (opts.precision < 64) throw Error(ErrorKind::InvalidArgument, "precision below 64 bits");
  Precision prec = opts.precision;
  Precision work = prec + 32;
  FixedPointSystem sys(rep, work);

  FixedRiemannResult res;
  res.unknowns = sys.unknowns();
  res.starts = opts.starts;
  for (const auto& g : rep.generators) {
    Blocks bl = split(g, rep.d);
    res.constraints.push_back("Z*" + rational_matrix_text(bl.c_scaled) + "*Z + " + rational_matrix_text(bl.a_scaled) +
                              "*Z - Z*" + rational_matrix_text(bl.d) + " - " + rational_matrix_text(bl.b_scaled) +
                              " = 0");
  }

  std::mt19937_64 gen(opts.seed);
  std::uniform_real_distribution<double> re_dist(-0.5, 0.5), diag_dist(0.3, 3.0), off_dist(-0.05, 0.05);
  Real target = pow2(-(prec + 16), work);
  Real accept = pow2(-prec / 2, work);
  std::vector<std::vector<Complex>> found;
  size_t min_rank = sys.unknowns();

  for (int s = 0; s < opts.starts; ++s) {
    std::vector<Complex> x;
    for (size_t a = 0; a < h; ++a)
      for (size_t b = a; b < h; ++b) {
        double re = re_dist(gen);
        double im = a == b ? diag_dist(gen) : off_dist(gen);
        x.emplace_back(Real(re, work), Real(im, work));
      }
    auto sol = converge(sys, x, work, opts.max_iterations, target);
    if (!sol) continue;
    if (!(norm2(sys.residual(*sol), work) < accept)) continue;
    NumMat zm = sys.to_matrix(*sol);
    CMatrix zc(h, h);
    for (size_t i = 0; i < h; ++i)
      for (size_t j = 0; j < h; ++j) zc(i, j) = ExactComplex(zm(i, j).with_precision(prec));
    if (!pav::in_siegel_space(zc, prec)) continue;
    ++res.converged;
    size_t rank = numeric_rank(sys.jacobian(*sol), work);
    min_rank = std::min(min_rank, rank);
    bool duplicate = false;
    for (const auto& other : found) {
      Real dist(0L, work);
      for (size_t t = 0; t < other.size(); ++t) dist = max(dist, abs(other[t] - (*sol)[t]));
      if (dist <= Real(1e-20, work)) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    found.push_back(*sol);

    FixedPoint fp;
    fp.z = zc;
    // algebraic reconstruction, accepted only when the equations then hold exactly
    // family samples are generic points, so only isolated solutions are reconstructed
    CMatrix exact(h, h);
    bool all = rank == sys.unknowns();
    for (size_t i = 0; i < h && all; ++i)
      for (size_t j = i; j < h; ++j) {
        auto r = recognize_algebraic(zm(i, j).with_precision(prec), opts.recognition_degree, prec);
        if (!r) {
          all = false;
          break;
        }
        exact(i, j) = ExactComplex(*r, prec);
        exact(j, i) = exact(i, j);
      }
    if (all) {
      bool zero = true;
      for (const auto& g : rep.generators) {
        CMatrix r = fixed_point_residual(g, rep.d, exact);
        if (!is_exact(r) || !r.is_zero()) zero = false;
      }
      if (zero) {
        fp.z = exact;
        fp.recognized = true;
      }
    }
    for (const auto& g : rep.generators) fp.residuals.push_back(max_norm(fixed_point_residual(g, rep.d, fp.z), prec));
    res.points.push_back(std::move(fp));
  }
  if (res.points.empty())
    throw Error(ErrorKind::NoSolution, "no start converged to a fixed Riemann matrix in the Siegel space");
  res.jacobian_rank = min_rank;
  res.family = min_rank < sys.unknowns();
  res.family_dimension = sys.unknowns() - min_rank;
  std::sort(res.points.begin(), res.points.end(),
            [&](const FixedPoint& a, const FixedPoint& b) { return lex_less(a.z, b.z, prec); });
  return res;
}

std::vector<CMatrix> restricted_analytic(const RestrictedRep& rep, const CMatrix& z, Precision prec) {
  size_t h = rep.h();
  if (z.rows() != h || z.cols() != h) throw Error(ErrorKind::InvalidArgument, "Riemann matrix size mismatch");
  RatMatrix dm(h, h), dinv(h, h);
  for (size_t i = 0; i < h; ++i) {
    dm(i, i) = Rational(rep.d.d[i]);
    dinv(i, i) = make_rational(1, rep.d.d[i]);
  }
  std::vector<CMatrix> out;
  for (size_t k = 0; k < rep.generators.size(); ++k) {
    const IntMatrix& n = rep.generators[k];
    CMatrix r = fixed_point_residual(n, rep.d, z);
    bool ok = is_exact(r) ? r.is_zero() : max_norm(r, prec) <= float_tolerance(prec);
    if (!ok) throw Error(ErrorKind::Eq4Violated, "generator " + std::to_string(k) + " does not fix Z");
    RatMatrix nr = latalg::to_rational(n);
    CMatrix rho = (to_complex(dm * nr.block(0, 0, h, h)) + z * to_complex(nr.block(h, 0, h, h))) * to_complex(dinv);
    out.push_back(rho);
  }
  return out;
}

}  // namespace abvar::gaction
