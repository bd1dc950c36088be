#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the library's formulas.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace seqtest::oracle {

// Joint law of (X, Y) on {0,1} x {0,1}; p[x][y].
struct BinaryJoint {
  std::string name;
  std::array<std::array<double, 2>, 2> p;
};

inline std::vector<BinaryJoint> binary_joint_corpus() {
  return {
      {"independent_uniform", {{{0.25, 0.25}, {0.25, 0.25}}}},
      {"identity", {{{0.5, 0.0}, {0.0, 0.5}}}},
      {"antipodal", {{{0.0, 0.5}, {0.5, 0.0}}}},
      {"skewed_dependent", {{{0.4, 0.1}, {0.2, 0.3}}}},
      {"independent_skewed", {{{0.7 * 0.2, 0.7 * 0.8}, {0.3 * 0.2, 0.3 * 0.8}}}},
  };
}

// E|X-X'||Y-Y'| + E|X-X'| E|Y-Y'| - 2 E|X-X'||Y-Y''| over i.i.d. copies.
inline double population_dcov(const BinaryJoint& j) {
  double paired = 0.0, ex = 0.0, ey = 0.0, cross = 0.0;
  for (int x1 = 0; x1 < 2; ++x1)
    for (int y1 = 0; y1 < 2; ++y1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int y2 = 0; y2 < 2; ++y2) {
          const double w = j.p[x1][y1] * j.p[x2][y2];
          paired += w * std::abs(x1 - x2) * std::abs(y1 - y2);
          ex += w * std::abs(x1 - x2);
          ey += w * std::abs(y1 - y2);
          for (int x3 = 0; x3 < 2; ++x3)
            for (int y3 = 0; y3 < 2; ++y3) {
              cross += w * j.p[x3][y3] * std::abs(x1 - x2) * std::abs(y1 - y3);
            }
        }
  return paired + ex * ey - 2.0 * cross;
}

// Symmetrized distance-covariance kernel averaged over all 24 orderings of
// the block: |x0-x1||y2-y3| + |x0-x1||y0-y1| - 2|x0-x1||y0-y2|.
template <typename Dist>
double dcov_kernel_by_permutation(Dist dx, Dist dy) {
  std::array<int, 4> perm{0, 1, 2, 3};
  double total = 0.0;
  int count = 0;
  do {
    const int a = perm[0], b = perm[1], c = perm[2], d = perm[3];
    total += dx(a, b) * dy(c, d) + dx(a, b) * dy(a, b) - 2.0 * dx(a, b) * dy(a, c);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / count;
}

// Smallest n with P(S_n <= width * sqrt((n/2) ln(1/alpha))) <= beta for
// S_n = 2 Bin(n, 1/2 + delta) - n, summing the pmf in long double.
inline std::uint64_t coin_n_star_by_pmf(double delta, double alpha, double beta,
                                        std::uint64_t n_cap, double width) {
  const long double p = 0.5L + delta, q = 0.5L - delta;
  for (std::uint64_t n = 1; n <= n_cap; ++n) {
    const long double p_n = width * std::sqrt(0.5L * n * std::log(1.0L / alpha));
    long double miss = 0.0L;
    for (std::uint64_t k = 0; k <= n; ++k) {
      const long double s = 2.0L * k - static_cast<long double>(n);
      if (s > p_n) break;
      if (q == 0.0L && k < n) continue;
      const long double log_pmf = std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) -
                                  std::lgamma(n - k + 1.0L) + k * std::log(p) +
                                  (k < n ? (n - k) * std::log(q) : 0.0L);
      miss += std::exp(log_pmf);
    }
    if (miss <= beta) return n;
  }
  return 0;
}

}  // namespace seqtest::oracle
