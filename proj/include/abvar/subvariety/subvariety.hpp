#pragma once

#include "abvar/pav/pav.hpp"

namespace abvar::subvariety {

/// Saturated Z-basis (columns) of the lattice of Im(f). f must satisfy the Hurwitz relation on A.
IntMatrix image_lattice(const pav::PolarizedAV& a, const RatMatrix& f);

struct InducedPolarization {
  IntMatrix p;                // 2g x 2h symplectic basis (e_1..e_h, f_1..f_h)
  pav::PolarizationType d;    // induced type, after the optional primitive rescale
  Integer scale = 1;          // c when the type (c, ..., c) was rescaled to principal
};

InducedPolarization induced_polarization(const pav::PolarizedAV& a, const IntMatrix& basis, bool primitive = false);

struct SubvarietyEmbedding {
  IntMatrix p;               // symplectic basis of the sublattice in host coordinates
  pav::PolarizationType d;   // induced type D, P^t J_E P = J_D
  CMatrix w;                 // factor Riemann matrix for (D W)
  CMatrix rho_a;             // analytic representation of the inclusion, g x h
  pav::PolarizedAV factor;   // (D W) validated, content normalized
};

/// Factor period matrix from a symplectic basis of a complex sublattice.
SubvarietyEmbedding subvariety_from_basis(const pav::PolarizedAV& a, const IntMatrix& symplectic,
                                          const pav::PolarizationType& d);

/// Image of a Hurwitz-compatible rational endomorphism as a polarized abelian subvariety.
SubvarietyEmbedding subvariety_period(const pav::PolarizedAV& a, const RatMatrix& f);

}  // namespace abvar::subvariety
