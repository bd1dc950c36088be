#include "seqtest/generators.hpp"

#include <cmath>

#include "seqtest/errors.hpp"

namespace seqtest {

CoinStream::CoinStream(double rho, CounterRng rng) : rho_(rho), rng_(rng) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("CoinStream: rho must lie in [0, 1]");
}

std::optional<Increment> CoinStream::operator()() {
  return coin_increment(rng_.uniform() < rho_ ? Flip::heads : Flip::tails);
}

GaussianPairStream::GaussianPairStream(std::size_t d, double shift, double sigma,
                                       CounterRng rng)
    : d_(d), shift_(shift), sigma_(sigma), rng_(rng), x1_(d), x2_(d), y1_(d), y2_(d) {
  if (d == 0) throw DomainError("GaussianPairStream: dimension must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("GaussianPairStream: sigma must be positive");
}

void GaussianPairStream::draw_block() {
  for (auto* v : {&x1_, &x2_}) {
    for (auto& e : *v) e = sigma_ * normal_(rng_);
  }
  for (auto* v : {&y1_, &y2_}) {
    for (auto& e : *v) e = sigma_ * normal_(rng_);
    (*v)[0] += shift_;
  }
}

std::optional<Increment> GaussianPairStream::operator()() {
  draw_block();
  return mean_increment(x1_, y1_, x2_, y2_);
}

GaussianMmdStream::GaussianMmdStream(std::size_t d, double shift, double sigma,
                                     KernelSpec kernel, CounterRng rng)
    : GaussianPairStream(d, shift, sigma, rng), kernel_(kernel) {}

std::optional<Increment> GaussianMmdStream::operator()() {
  draw_block();
  return mmd_increment(kernel_, x1_, x2_, y1_, y2_);
}

DependentPairStream::DependentPairStream(std::size_t d, double corr, CounterRng rng,
                                         double distance_bound)
    : d_(d), corr_(corr), distance_bound_(distance_bound), rng_(rng) {
  if (d == 0) throw DomainError("DependentPairStream: dimension must be >= 1");
  if (!(corr >= -1.0 && corr <= 1.0)) {
    throw DomainError("DependentPairStream: corr must lie in [-1, 1]");
  }
}

PairBlock DependentPairStream::next_block() {
  PairBlock block;
  const double noise = std::sqrt(1.0 - corr_ * corr_);
  for (int j = 0; j < 4; ++j) {
    std::vector<double> x(d_), y(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      x[i] = normal_(rng_);
      y[i] = corr_ * x[i] + noise * normal_(rng_);
    }
    block.x.emplace_back(std::move(x));
    block.y.emplace_back(std::move(y));
  }
  return block;
}

std::optional<Increment> DependentPairStream::operator()() {
  const PairBlock block = next_block();
  if (distance_bound_ > 0.0) return bounded_dcov_increment(block, distance_bound_);
  return dcov_increment(block);
}

CoinStream gen_coin_stream(double rho, std::uint64_t seed) {
  return CoinStream(rho, CounterRng(seed));
}

GaussianPairStream gen_gaussian_pair_stream(std::size_t d, double shift, double sigma,
                                            std::uint64_t seed) {
  return GaussianPairStream(d, shift, sigma, CounterRng(seed));
}

}  // namespace seqtest
