#pragma once

#include "abvar/subvariety/subvariety.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace abvar::decompose {

/// Position of a_ij (i < j, zero-based) in the lexicographic list a_12, a_13, ..., a_{n-1,n}.
size_t pair_index(size_t n, size_t i, size_t j);
size_t pair_count(size_t n);

/// omega = sum a_ij dx_i ^ dx_j on the 2g lattice coordinates.
struct NSForm {
  size_t g = 0;
  std::vector<Rational> a;

  /// Alternating matrix with E(i, j) = -a_ij for i < j.
  RatMatrix e_omega() const;
  const Rational& coeff(size_t i, size_t j) const { return a[pair_index(2 * g, i, j)]; }
  std::string to_string() const;
  friend bool operator==(const NSForm& x, const NSForm& y) { return x.g == y.g && x.a == y.a; }
};

NSForm make_form(size_t g, std::vector<Rational> a);
/// Inverse of e_omega: reads a_ij = -E(i, j).
NSForm form_from_matrix(const RatMatrix& e);

/// Differential forms on 2g symbols: bitmask of the wedge factors (ascending) -> coefficient.
using ExteriorForm = std::map<std::uint32_t, ExactComplex>;

/// dz_1 ^ ... ^ dz_g with dz_k = sum_m Pi(k, m) dx_m.
ExteriorForm holomorphic_volume(const CMatrix& period);
/// omega ^ vol for the 2-form with coefficients a.
ExteriorForm wedge_two_form(const std::vector<ExactComplex>& a, const ExteriorForm& vol, size_t n);

struct NSMembership {
  bool member = false;
  bool exact = true;
  ExteriorForm defect;   // nonzero coefficients of omega ^ dz_1 ^ ... ^ dz_g
  Real max_defect;
};
NSMembership ns_membership(const pav::PolarizedAV& a, const std::vector<Rational>& coeffs);

/// Rational linear constraints on (x; 1) equivalent to a list of complex linear equations
/// sum_k c_k x_k + c_const = 0 (constant last). Exact entries are separated over a Q-basis
/// of their common field; float entries go through integer relation detection.
struct SeparatedSystem {
  RatMatrix rows;       // m x (n + 1)
  bool exact = true;
  std::string field;    // description of the common field in exact mode
};
SeparatedSystem separate(const std::vector<std::vector<ExactComplex>>& equations, size_t unknowns, Precision prec);

/// Affine solution set particular + directions * t of a separated system.
struct AffineSpace {
  bool consistent = false;
  std::vector<Rational> particular;
  RatMatrix directions;   // n x k
  std::vector<size_t> free;  // unknowns used as parameters
};
AffineSpace solve_affine(const RatMatrix& rows);

/// Q-basis (columns) of the Neron-Severi forms of A: the kernel of the wedge condition.
struct NSKernel {
  RatMatrix basis;
  bool exact = true;
};
NSKernel ns_kernel(const pav::PolarizedAV& a);

struct SearchOptions {
  long max_height = 24;
  std::uint64_t max_candidates = 3'000'000;
  size_t max_solutions = 64;
};

/// Solutions of the sub-elliptic criterion for a surface of type (1, d).
struct SubEllipticResult {
  size_t d = 1;
  SeparatedSystem system;     // trace normalization + separated second equation, on (a; 1)
  AffineSpace family;         // affine part; the Pfaffian cuts it further
  std::vector<NSForm> solutions;   // lowest height level found, lexicographically sorted
  std::optional<NSForm> canonical;
  long height_searched = 0;
  std::uint64_t evaluated = 0;
  bool complete = false;      // no rational solution exists at any height
  bool truncated = false;     // candidate budget ran out before max_height
};
SubEllipticResult sub_elliptic_search_g2(const pav::PolarizedAV& a, const SearchOptions& opts = {},
                                         const std::function<bool(const NSForm&)>& accept = {});

/// Residuals of the three criterion equations for one coefficient vector.
struct CriterionValues {
  Rational trace;       // d a13 + a24 + d
  ExactComplex second;
  Rational pfaffian;
};
CriterionValues criterion_values(const pav::PolarizedAV& a, const std::vector<Rational>& coeffs);
/// Exact substitution into the separated family constraints and the Pfaffian.
bool family_contains(const SubEllipticResult& r, const std::vector<Rational>& coeffs);

struct IdempotentPair {
  RatMatrix f;
  RatMatrix complement;
  Rational scale = 1;   // f was divided by this to become idempotent
};
/// f = J_E^-1 E_omega, rescaled when f^2 = c f. Throws NotIdempotent, DegenerateRank, NoSolution.
IdempotentPair idempotent_from_ns(const pav::PolarizedAV& a, const NSForm& form);
/// Same checks for a user-supplied rational endomorphism.
IdempotentPair idempotent_from_endomorphism(const pav::PolarizedAV& a, const RatMatrix& f);

std::pair<subvariety::SubvarietyEmbedding, subvariety::SubvarietyEmbedding> decompose_step(
    const pav::PolarizedAV& a, const IdempotentPair& pair);

struct EllipticReport {
  ExactComplex tau;              // reduced: -1/2 < Re <= 1/2, |tau| >= 1, Re >= 0 on the unit circle
  std::array<Integer, 4> transform{1, 0, 0, 1};   // (a, b, c, d): tau = (a t + b) / (c t + d)
  bool cm = false;
  Integer discriminant = 0;      // b^2 - 4ac of the primitive minimal polynomial
  std::vector<Integer> min_poly; // low degree first
  bool recognized = false;       // CM found from a float value
};
EllipticReport elliptic_normalize(const Integer& d, const ExactComplex& w, Precision prec = kDefaultPrecision);
EllipticReport elliptic_normalize(const pav::PolarizedAV& e);

enum class NodeKind { Split, Elliptic, SimpleCertified, SearchExhausted };
const char* to_string(NodeKind k);

struct DecompositionTree {
  pav::PolarizedAV node;
  NodeKind kind = NodeKind::SearchExhausted;
  std::optional<EllipticReport> elliptic;
  long search_height = 0;
  std::string method;    // how the split or the verdict was obtained
  // split nodes
  std::optional<NSForm> form;
  RatMatrix f;
  Rational scale = 1;
  std::vector<subvariety::SubvarietyEmbedding> embeddings;
  std::vector<DecompositionTree> children;
  IntMatrix isogeny;     // interleaved symplectic bases of the two children
  Integer degree = 0;

  size_t g() const { return node.g(); }
};

struct DecomposeOptions {
  SearchOptions search;
  size_t max_genus = 8;
  /// Rational endomorphisms or NS forms tried first at nodes of matching dimension.
  std::vector<RatMatrix> endomorphisms;
  std::vector<NSForm> forms;
  bool heuristic = true;
  std::uint64_t heuristic_budget = 20000;
};

DecompositionTree poincare_decompose(const pav::PolarizedAV& a, const DecomposeOptions& opts = {});

std::vector<const DecompositionTree*> leaves(const DecompositionTree& t);

/// Lattice map from the product of all leaves (interleaved symplectic order) into the root,
/// with the leaf types expressed in root units.
struct AssembledIsogeny {
  IntMatrix p;
  pav::PolarizationType types;
};
AssembledIsogeny assemble(const DecompositionTree& t);

}  // namespace abvar::decompose
