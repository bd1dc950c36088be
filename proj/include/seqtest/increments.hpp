#pragma once

#include <span>
#include <vector>

#include "seqtest/core.hpp"

namespace seqtest {

struct KernelSpec {
  enum class Kind { linear, gaussian };

  Kind kind = Kind::linear;
  // Bandwidth of the gaussian kernel exp(-||a - b||^2 / gamma^2).
  double gamma = 1.0;

  static KernelSpec linear() { return {Kind::linear, 1.0}; }
  static KernelSpec gaussian(double gamma);
};

// Observations drawn from two streams. Two-sample families use two points
// from each stream; the independence family uses four (x_j, y_j) pairs.
struct PairBlock {
  std::vector<Observation> x;
  std::vector<Observation> y;
};

enum class Flip { heads, tails };

// heads -> +1, tails -> -1.
Increment coin_increment(Flip flip);

// (x1 - y1)^T (x2 - y2). Bounded by 1 in absolute value when all inputs have
// norm at most 1/2.
Increment mean_increment(std::span<const double> x1, std::span<const double> y1,
                         std::span<const double> x2, std::span<const double> y2);

double kernel_eval(const KernelSpec& kernel, std::span<const double> a,
                   std::span<const double> b);

// k(x1, x2) + k(y1, y2) - k(x1, y2) - k(x2, y1). With the linear kernel this
// is evaluated in factored form and matches mean_increment(x1, y1, x2, y2)
// exactly.
Increment mmd_increment(const KernelSpec& kernel, std::span<const double> x1,
                        std::span<const double> x2, std::span<const double> y1,
                        std::span<const double> y2);

// Unbiased distance-covariance step over a block of four (x, y) pairs:
//   A = 1/6  * sum_{a<b} |x_a - x_b| |y_c - y_d|   ({c, d} the complement)
//   B = 1/6  * sum_{a<b} |x_a - x_b| |y_a - y_b|
//   C = 1/12 * sum over ordered distinct (a, b, c) of |x_a - x_b| |y_a - y_c|
// h = A + B - C, whose expectation is the population distance covariance.
Increment dcov_increment(const PairBlock& block);

// dcov_increment scaled by 1 / (2 bound^2), which keeps |h| <= 1 whenever every
// within-block distance in x and in y is at most `bound`. Throws
// NormBoundViolated otherwise.
Increment bounded_dcov_increment(const PairBlock& block, double bound);

}  // namespace seqtest
