#include "seqtest/increments.hpp"

#include <array>
#include <cmath>
#include <string>

#include "seqtest/errors.hpp"

namespace seqtest {
namespace {

void require_same_dimension(std::span<const double> a, std::span<const double> b,
                            const char* where) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(where) + ": dimensions " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()) + " differ");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// Index pairs {a, b} with a < b, and the complementary pair for each.
constexpr std::array<std::array<int, 2>, 6> kPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<int, 6> kComplement = {5, 4, 3, 2, 1, 0};

using DistanceTable = std::array<std::array<double, 4>, 4>;

DistanceTable distances(const std::vector<Observation>& points) {
  DistanceTable table{};
  const std::size_t dim = points[0].dimension();
  for (const auto& p : points) {
    if (p.dimension() != dim) {
      throw DimensionMismatch("dcov_increment: observations within a block differ in dimension");
    }
  }
  for (const auto& [a, b] : kPairs) {
    const double d = std::sqrt(squared_distance(points[a], points[b]));
    table[a][b] = d;
    table[b][a] = d;
  }
  return table;
}

}  // namespace

KernelSpec KernelSpec::gaussian(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gaussian kernel bandwidth must be positive");
  return {Kind::gaussian, gamma};
}

Increment coin_increment(Flip flip) {
  return {flip == Flip::heads ? 1.0 : -1.0, IncrementFamily::coin};
}

Increment mean_increment(std::span<const double> x1, std::span<const double> y1,
                         std::span<const double> x2, std::span<const double> y2) {
  require_same_dimension(x1, y1, "mean_increment");
  require_same_dimension(x1, x2, "mean_increment");
  require_same_dimension(x1, y2, "mean_increment");
  double s = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) s += (x1[i] - y1[i]) * (x2[i] - y2[i]);
  return {s, IncrementFamily::mean};
}

double kernel_eval(const KernelSpec& kernel, std::span<const double> a,
                   std::span<const double> b) {
  require_same_dimension(a, b, "kernel_eval");
  switch (kernel.kind) {
    case KernelSpec::Kind::linear:
      return dot(a, b);
    case KernelSpec::Kind::gaussian:
      return std::exp(-squared_distance(a, b) / (kernel.gamma * kernel.gamma));
  }
  return 0.0;
}

Increment mmd_increment(const KernelSpec& kernel, std::span<const double> x1,
                        std::span<const double> x2, std::span<const double> y1,
                        std::span<const double> y2) {
  if (kernel.kind == KernelSpec::Kind::linear) {
    return {mean_increment(x1, y1, x2, y2).value, IncrementFamily::mmd};
  }
  require_same_dimension(x1, x2, "mmd_increment");
  require_same_dimension(x1, y1, "mmd_increment");
  require_same_dimension(x1, y2, "mmd_increment");
  const double h = kernel_eval(kernel, x1, x2) + kernel_eval(kernel, y1, y2) -
                   kernel_eval(kernel, x1, y2) - kernel_eval(kernel, x2, y1);
  return {h, IncrementFamily::mmd};
}

Increment dcov_increment(const PairBlock& block) {
  if (block.x.size() != 4 || block.y.size() != 4) {
    throw BlockSizeMismatch("dcov_increment: a block holds exactly four (x, y) pairs, got " +
                            std::to_string(block.x.size()) + " x and " +
                            std::to_string(block.y.size()) + " y");
  }
  const DistanceTable dx = distances(block.x);
  const DistanceTable dy = distances(block.y);

  double paired = 0.0;
  double crossed = 0.0;
  for (std::size_t k = 0; k < kPairs.size(); ++k) {
    const auto [a, b] = kPairs[k];
    const auto [c, d] = kPairs[kComplement[k]];
    paired += dx[a][b] * dy[a][b];
    crossed += dx[a][b] * dy[c][d];
  }
  double triples = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      for (int c = 0; c < 4; ++c) {
        if (c == a || c == b) continue;
        triples += dx[a][b] * dy[a][c];
      }
    }
  }
  return {crossed / 6.0 + paired / 6.0 - triples / 12.0, IncrementFamily::dcov};
}

Increment bounded_dcov_increment(const PairBlock& block, double bound) {
  if (!(bound > 0.0)) throw DomainError("bounded_dcov_increment: bound must be positive");
  const Increment raw = dcov_increment(block);
  for (const auto* points : {&block.x, &block.y}) {
    for (const auto& [a, b] : kPairs) {
      const double d =
          std::sqrt(squared_distance((*points)[a], (*points)[b]));
      if (d > bound) {
        throw NormBoundViolated("bounded_dcov_increment: distance " + std::to_string(d) +
                                " exceeds declared bound " + std::to_string(bound));
      }
    }
  }
  return {raw.value / (2.0 * bound * bound), IncrementFamily::dcov};
}

}  // namespace seqtest
