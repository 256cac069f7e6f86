#pragma once

#include "abvar/pav/pav.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abvar::gaction {

/// Integral symplectic representation of a finite group on a lattice with form J_E.
struct SymplecticRep {
  pav::PolarizationType e;
  std::vector<IntMatrix> generators;
  std::vector<IntMatrix> elements;  // optional full element list

  size_t g() const { return e.g(); }
};

/// Checks N^t J_E N = J_E for every generator and element; throws NotSymplectic.
void validate(const SymplecticRep& rep);

/// (1/n) sum of the elements after verifying closure under products. Throws NotClosed.
RatMatrix subgroup_idempotent(const std::vector<IntMatrix>& elements);

struct RestrictedRep {
  pav::PolarizationType d;
  IntMatrix p;                          // embedding 2g x 2h
  std::vector<IntMatrix> generators;    // 2h x 2h, in Sp^D

  size_t h() const { return d.g(); }
};

/// Solves rho(g) P = P rho_B(g) over Z for every generator. Throws NotStable / NotSymplectic.
RestrictedRep restrict_action(const SymplecticRep& rep, const IntMatrix& p, const pav::PolarizationType& d);

struct FixedRiemannOptions {
  Precision precision = kDefaultPrecision;
  int starts = 32;
  std::uint64_t seed = 0x5EED;
  int max_iterations = 200;
  int recognition_degree = 4;
};

struct FixedPoint {
  CMatrix z;                     // exact when recognized, big-float otherwise
  bool recognized = false;
  std::vector<Real> residuals;   // Eq. residual per generator (0 when verified exactly)
};

struct FixedRiemannResult {
  std::vector<FixedPoint> points;   // sorted, pairwise distinct
  bool family = false;              // solution set has positive dimension
  size_t family_dimension = 0;
  size_t jacobian_rank = 0;
  size_t unknowns = 0;
  int starts = 0;
  int converged = 0;
  std::vector<std::string> constraints;   // one matrix equation per generator
};

/// Symmetric Z in H_h with Z c D^-1 Z + D a D^-1 Z - Z d - D b = 0 for every generator [[a, b], [c, d]].
/// Throws NoSolution when no start converges inside H_h, SizeGate when h > 6.
FixedRiemannResult fixed_riemann(const RestrictedRep& rep, const FixedRiemannOptions& opts = {});

/// Residual matrix of the fixed-point equation for one generator.
CMatrix fixed_point_residual(const IntMatrix& n, const pav::PolarizationType& d, const CMatrix& z);

/// (D a + Z c) D^-1 per generator, after verifying the fixed-point equation. Throws Eq4Violated.
std::vector<CMatrix> restricted_analytic(const RestrictedRep& rep, const CMatrix& z,
                                         Precision prec = kDefaultPrecision);

}  // namespace abvar::gaction
