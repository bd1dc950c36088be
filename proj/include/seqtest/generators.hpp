#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/increments.hpp"
#include "seqtest/rng.hpp"

namespace seqtest {

// Endless i.i.d. +/-1 flips with P(+1) = rho.
class CoinStream {
 public:
  CoinStream(double rho, CounterRng rng);
  std::optional<Increment> operator()();

 private:
  double rho_;
  CounterRng rng_;
};

// Mean-test increments from X ~ N(0, sigma^2 I_d) and
// Y ~ N((shift, 0, ..., 0), sigma^2 I_d). Data are used unscaled.
class GaussianPairStream {
 public:
  GaussianPairStream(std::size_t d, double shift, double sigma, CounterRng rng);
  std::optional<Increment> operator()();

 protected:
  void draw_block();

  std::size_t d_;
  double shift_;
  double sigma_;
  CounterRng rng_;
  std::normal_distribution<double> normal_;
  std::vector<double> x1_, x2_, y1_, y2_;
};

// Same data as GaussianPairStream, reduced through an MMD kernel.
class GaussianMmdStream : private GaussianPairStream {
 public:
  GaussianMmdStream(std::size_t d, double shift, double sigma, KernelSpec kernel,
                    CounterRng rng);
  std::optional<Increment> operator()();

 private:
  KernelSpec kernel_;
};

// Blocks of four (x, y) pairs with x ~ N(0, I_d) and
// y = corr * x + sqrt(1 - corr^2) * z, z ~ N(0, I_d); x and y are
// independent iff corr = 0. A positive `distance_bound` routes each block
// through bounded_dcov_increment.
class DependentPairStream {
 public:
  DependentPairStream(std::size_t d, double corr, CounterRng rng, double distance_bound = 0.0);
  std::optional<Increment> operator()();
  PairBlock next_block();

 private:
  std::size_t d_;
  double corr_;
  double distance_bound_;
  CounterRng rng_;
  std::normal_distribution<double> normal_;
};

CoinStream gen_coin_stream(double rho, std::uint64_t seed);
GaussianPairStream gen_gaussian_pair_stream(std::size_t d, double shift, double sigma,
                                            std::uint64_t seed);

}  // namespace seqtest
