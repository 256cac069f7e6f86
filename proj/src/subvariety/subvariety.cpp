#include "abvar/subvariety/subvariety.hpp"

#include <algorithm>

namespace abvar::subvariety {

using pav::PolarizedAV;
using pav::PolarizationType;

IntMatrix image_lattice(const PolarizedAV& a, const RatMatrix& f) {
  size_t n = 2 * a.g();
  if (f.rows() != n || f.cols() != n)
    throw Error(ErrorKind::InvalidArgument, "endomorphism must be " + std::to_string(n) + "x" + std::to_string(n));
  if (f.is_zero()) throw Error(ErrorKind::ZeroImage, "endomorphism is zero");
  pav::analytic_from_rational(a, a, f);
  return latalg::saturate(f);
}

InducedPolarization induced_polarization(const PolarizedAV& a, const IntMatrix& basis, bool primitive) {
  if (basis.cols() == 0) throw Error(ErrorKind::ZeroImage, "empty basis");
  latalg::SymplecticBasis sb = latalg::frobenius_symplectic_basis(basis, a.j());
  InducedPolarization out{sb.s, PolarizationType{sb.d}, 1};
  if (primitive) {
    const Integer& c = sb.d.front();
    bool uniform = std::all_of(sb.d.begin(), sb.d.end(), [&](const Integer& x) { return x == c; });
    if (uniform && c > 1) {
      out.scale = c;
      for (auto& x : out.d.d) x = 1;
    }
  }
  return out;
}

SubvarietyEmbedding subvariety_from_basis(const PolarizedAV& a, const IntMatrix& symplectic,
                                          const PolarizationType& d) {
  size_t h = d.g();
  if (symplectic.cols() != 2 * h || symplectic.rows() != 2 * a.g())
    throw Error(ErrorKind::InvalidArgument, "symplectic basis shape does not match the type");
  CMatrix pi = a.period();
  CMatrix beta1 = to_complex(symplectic.block(0, 0, symplectic.rows(), h));
  CMatrix beta2 = to_complex(symplectic.block(0, h, symplectic.rows(), h));

  SubvarietyEmbedding out;
  out.p = symplectic;
  out.d = d;
  out.rho_a = pi * beta1;
  for (size_t i = 0; i < out.rho_a.rows(); ++i)
    for (size_t j = 0; j < h; ++j) out.rho_a(i, j) = out.rho_a(i, j) * ExactComplex(make_rational(1, d.d[j]));

  CMatrix rhs = pi * beta2;
  if (is_exact(out.rho_a) && is_exact(rhs)) {
    out.w = solve_full_rank(out.rho_a, rhs);
  } else {
    Precision p = a.precision;
    out.w = with_precision(solve_full_rank(with_precision(out.rho_a, 2 * p), with_precision(rhs, 2 * p)), p);
  }
  pav::BuildOptions opts;
  opts.precision = a.precision;
  opts.label = a.label.empty() ? "factor" : a.label + "/factor";
  try {
    out.factor = pav::build_period(d, out.w, opts);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotSymmetric || e.kind() == ErrorKind::NotPositiveDefinite)
      throw Error(ErrorKind::NotInSiegel, std::string("factor Riemann matrix rejected: ") + e.what());
    throw;
  }
  return out;
}

SubvarietyEmbedding subvariety_period(const PolarizedAV& a, const RatMatrix& f) {
  IntMatrix basis = image_lattice(a, f);
  if (basis.cols() % 2 != 0) throw Error(ErrorKind::RankDeficiency, "image lattice has odd rank");
  InducedPolarization ip = induced_polarization(a, basis);
  return subvariety_from_basis(a, ip.p, ip.d);
}

}  // namespace abvar::subvariety
