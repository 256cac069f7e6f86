#pragma once

#include "abvar/decompose/decompose.hpp"

#include <string>
#include <vector>

namespace abvar::io {

struct VerifyFailure {
  std::string node;   // path such as "root", "root/1/0"
  std::string check;
  std::string detail;
};

struct VerifyReport {
  size_t checks = 0;
  std::vector<VerifyFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Re-checks a decomposition tree against the pav it claims to decompose: Riemann validity of every
/// node, polarization pullbacks, Hurwitz relations, child factors, split degrees and elliptic
/// normalizations, and the degree product of the assembled isogeny.
VerifyReport verify_tree(const decompose::DecompositionTree& tree, const pav::PolarizedAV& root);

}  // namespace abvar::io
