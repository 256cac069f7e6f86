#include "abvar/latalg/lll.hpp"

#include "abvar/error.hpp"

namespace abvar::latalg {

namespace {

Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  Integer s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Indices below are 1-based to follow the usual presentation: d[0] = 1, lambda[k][j] for j < k.
struct IntegralLll {
  IntRows& b;
  size_t n;
  std::vector<Integer> d;
  std::vector<std::vector<Integer>> lambda;
  Integer delta_num, delta_den;

  IntegralLll(IntRows& basis, const Rational& delta)
      : b(basis), n(basis.size()), d(n + 1), lambda(n + 1, std::vector<Integer>(n + 1)),
        delta_num(delta.get_num()), delta_den(delta.get_den()) {}

  std::vector<Integer>& row(size_t k) { return b[k - 1]; }

  void reduce(size_t k, size_t l) {
    Integer twice = 2 * abs(lambda[k][l]);
    if (twice <= d[l]) return;
    Integer q = round_nearest(make_rational(lambda[k][l], d[l]));
    auto& bk = row(k);
    const auto& bl = row(l);
    for (size_t i = 0; i < bk.size(); ++i) bk[i] -= q * bl[i];
    lambda[k][l] -= q * d[l];
    for (size_t i = 1; i < l; ++i) lambda[k][i] -= q * lambda[l][i];
  }

  void swap(size_t k, size_t kmax) {
    std::swap(row(k), row(k - 1));
    for (size_t j = 1; j + 1 < k; ++j) std::swap(lambda[k][j], lambda[k - 1][j]);
    Integer lam = lambda[k][k - 1];
    Integer big_b = (d[k - 2] * d[k] + lam * lam) / d[k - 1];
    for (size_t i = k + 1; i <= kmax; ++i) {
      Integer t = lambda[i][k];
      lambda[i][k] = (d[k] * lambda[i][k - 1] - lam * t) / d[k - 1];
      lambda[i][k - 1] = (big_b * t + lam * lambda[i][k]) / d[k];
    }
    d[k - 1] = big_b;
  }

  void run() {
    if (n <= 1) return;
    size_t k = 2, kmax = 1;
    d[0] = 1;
    d[1] = dot(row(1), row(1));
    if (d[1] == 0) throw Error(ErrorKind::InvalidArgument, "LLL input contains a zero row");
    while (k <= n) {
      if (k > kmax) {
        kmax = k;
        for (size_t j = 1; j <= k; ++j) {
          Integer u = dot(row(k), row(j));
          for (size_t i = 1; i < j; ++i) u = (d[i] * u - lambda[k][i] * lambda[j][i]) / d[i - 1];
          if (j < k) lambda[k][j] = u;
          else d[k] = u;
        }
        if (d[k] == 0) throw Error(ErrorKind::InvalidArgument, "LLL input rows are linearly dependent");
      }
      reduce(k, k - 1);
      Integer lam = lambda[k][k - 1];
      if (delta_den * (d[k] * d[k - 2] + lam * lam) < delta_num * d[k - 1] * d[k - 1]) {
        swap(k, kmax);
        if (k > 2) --k;
      } else {
        for (size_t l = k - 1; l-- > 1;) reduce(k, l);
        ++k;
      }
    }
  }
};

}  // namespace

void lll_reduce(IntRows& basis, const Rational& delta) {
  IntegralLll state(basis, delta);
  state.run();
}

}  // namespace abvar::latalg
