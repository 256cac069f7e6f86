#pragma once

#include "abvar/numerics/rational.hpp"

#include <vector>

namespace abvar::latalg {

using IntRows = std::vector<std::vector<Integer>>;

/// LLL-reduces the rows of `basis` in place using exact integer Gram-Schmidt data
/// (Cohen's integral variant). Rows must be linearly independent.
/// `delta` is the Lovasz constant, 1/4 < delta <= 1.
void lll_reduce(IntRows& basis, const Rational& delta = Rational(99, 100));

}  // namespace abvar::latalg
