#pragma once

#include <cstdint>

#include "seqtest/core.hpp"

namespace seqtest {

// Predicted behaviour of the linear-time batch mean test.
struct PowerReport {
  std::uint64_t N = 0;
  double alpha = 0.0;
  // Predicted type II error, 1 - predicted_power.
  double beta = 0.0;
  double predicted_power = 0.0;
  // Var(T_N) under the null and the alternative.
  double V_N0 = 0.0;
  double V_N1 = 0.0;
};

// Per-step mean and variance of the mean-test increment:
//   E h = ||delta||^2,  Var h = 4 tr(Sigma^2) + 4 delta^T Sigma delta.
struct IncrementMoments {
  double mean = 0.0;
  double variance = 0.0;
  double null_variance = 0.0;  // 4 tr(Sigma^2)
};

IncrementMoments mean_increment_moments(const ProblemSpec& spec);

// Asymptotic power of the known-variance batch test at N blocks:
//   Phi( sqrt(N) ||d||^2 / sqrt(8 tr(S^2) + 8 d'Sd) - z_a sqrt(tr(S^2) / (tr(S^2) + d'Sd)) )
// Throws DegenerateSigma when Sigma = 0 and delta = 0.
double batch_power(std::uint64_t N, const ProblemSpec& spec, double alpha);

PowerReport power_report(std::uint64_t N, const ProblemSpec& spec, double alpha);

// Smallest batch size with predicted power at least 1 - beta:
//   ceil( 8 (z_beta + z_alpha)^2 (tr(S^2) + d'Sd) / ||d||^4 ).
// Throws NullDelta when delta = 0.
std::uint64_t oracle_sample_size(const ProblemSpec& spec, double alpha, double beta);

// Exact P(S_N > p_N) for the +-1 coin walk with P(heads) = 1/2 + delta and
// the Hoeffding boundary p_N = batch_hoeffding_threshold(N, alpha, width).
// width = 2 is the level-alpha boundary for +-1 steps.
double coin_batch_power(std::uint64_t N, double delta, double alpha, double width = 2.0);

// min{ n <= n_cap : P(S_n <= p_n) <= beta } under P(heads) = 1/2 + delta,
// from the exact binomial law. Throws CapExceeded if no n <= n_cap qualifies.
std::uint64_t coin_oracle_sample_size(double delta, double alpha, double beta,
                                      std::uint64_t n_cap = 1'000'000, double width = 2.0);

// (1 + K1 beta^K2 / ln(1/beta)) n_star.
double stopping_bound(std::uint64_t n_star, double beta, double K1, double K2);

// exp(-K n delta^2).
double tail_survival_coin(std::uint64_t n, double delta, double K);

// Diagnostic only: batch power at N minus the normal-approximation mass of
// S_N between p_N and the sequential boundary q_N, clamped to [0, 1].
double refined_coin_sequential_power(std::uint64_t N, double delta, double alpha, double q_N,
                                     double width = 2.0);

}  // namespace seqtest
