#include "seqtest/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/binomial.hpp>

#include "seqtest/errors.hpp"
#include "seqtest/thresholds.hpp"

namespace seqtest {
namespace {

struct Quadratics {
  double trace_sigma_sq;  // tr(Sigma^2)
  double delta_sigma_delta;
  double delta_norm_sq;
};

Quadratics quadratics(const ProblemSpec& spec) {
  spec.validate();
  const Eigen::VectorXd delta = spec.delta();
  const Eigen::MatrixXd sigma_sq = spec.sigma * spec.sigma;
  return {sigma_sq.trace(), delta.dot(spec.sigma * delta), delta.squaredNorm()};
}

void require_open_unit(double x, const char* name, const char* where) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError(std::string(where) + ": " + name + " must lie in (0, 1)");
  }
}

void require_coin_delta(double delta, const char* where) {
  if (!(delta > 0.0 && delta <= 0.5)) {
    throw DomainError(std::string(where) + ": delta must lie in (0, 1/2]");
  }
}

// P(S_n <= p_n) for S_n = 2 Bin(n, rho) - n.
double coin_miss_probability(std::uint64_t n, double rho, double alpha, double width) {
  const double p_n = batch_hoeffding_threshold(n, alpha, width);
  const double nd = static_cast<double>(n);
  const double k = std::floor((nd + p_n) / 2.0);
  if (k >= nd) return 1.0;
  if (k < 0.0) return 0.0;
  const boost::math::binomial_distribution<double> law(nd, rho);
  return boost::math::cdf(law, k);
}

}  // namespace

IncrementMoments mean_increment_moments(const ProblemSpec& spec) {
  const Quadratics q = quadratics(spec);
  return {q.delta_norm_sq, 4.0 * q.trace_sigma_sq + 4.0 * q.delta_sigma_delta,
          4.0 * q.trace_sigma_sq};
}

double batch_power(std::uint64_t N, const ProblemSpec& spec, double alpha) {
  if (N < 1) throw DomainError("batch_power: N must be >= 1");
  require_open_unit(alpha, "alpha", "batch_power");
  const Quadratics q = quadratics(spec);
  if (q.trace_sigma_sq == 0.0 && q.delta_norm_sq == 0.0) {
    throw DegenerateSigma("batch_power: Sigma = 0 and delta = 0 leave the statistic degenerate");
  }
  const double spread = q.trace_sigma_sq + q.delta_sigma_delta;
  // Sigma = 0 with delta != 0: T_N = N ||delta||^2 deterministically.
  if (spread == 0.0) return 1.0;
  const double z_alpha = normal_quantile(alpha);
  const double arg =
      std::sqrt(static_cast<double>(N)) * q.delta_norm_sq / std::sqrt(8.0 * spread) -
      z_alpha * std::sqrt(q.trace_sigma_sq / spread);
  return normal_cdf(arg);
}

PowerReport power_report(std::uint64_t N, const ProblemSpec& spec, double alpha) {
  const IncrementMoments m = mean_increment_moments(spec);
  PowerReport report;
  report.N = N;
  report.alpha = alpha;
  report.predicted_power = batch_power(N, spec, alpha);
  report.beta = 1.0 - report.predicted_power;
  report.V_N0 = static_cast<double>(N) * m.null_variance;
  report.V_N1 = static_cast<double>(N) * m.variance;
  return report;
}

std::uint64_t oracle_sample_size(const ProblemSpec& spec, double alpha, double beta) {
  require_open_unit(alpha, "alpha", "oracle_sample_size");
  require_open_unit(beta, "beta", "oracle_sample_size");
  const Quadratics q = quadratics(spec);
  if (q.delta_norm_sq == 0.0) {
    throw NullDelta("oracle_sample_size: delta = 0, no finite sample size exists");
  }
  const double z = normal_quantile(beta) + normal_quantile(alpha);
  const double n = 8.0 * z * z * (q.trace_sigma_sq + q.delta_sigma_delta) /
                   (q.delta_norm_sq * q.delta_norm_sq);
  return static_cast<std::uint64_t>(std::max(1.0, std::ceil(n)));
}

double coin_batch_power(std::uint64_t N, double delta, double alpha, double width) {
  if (N < 1) throw DomainError("coin_batch_power: N must be >= 1");
  if (!(delta >= 0.0 && delta <= 0.5)) {
    throw DomainError("coin_batch_power: delta must lie in [0, 1/2]");
  }
  require_open_unit(alpha, "alpha", "coin_batch_power");
  return 1.0 - coin_miss_probability(N, 0.5 + delta, alpha, width);
}

std::uint64_t coin_oracle_sample_size(double delta, double alpha, double beta,
                                      std::uint64_t n_cap, double width) {
  require_coin_delta(delta, "coin_oracle_sample_size");
  require_open_unit(alpha, "alpha", "coin_oracle_sample_size");
  require_open_unit(beta, "beta", "coin_oracle_sample_size");
  const double rho = 0.5 + delta;
  for (std::uint64_t n = 1; n <= n_cap; ++n) {
    if (coin_miss_probability(n, rho, alpha, width) <= beta) return n;
  }
  throw CapExceeded("coin_oracle_sample_size: no n <= " + std::to_string(n_cap) +
                    " reaches type II error " + std::to_string(beta));
}

double stopping_bound(std::uint64_t n_star, double beta, double K1, double K2) {
  require_open_unit(beta, "beta", "stopping_bound");
  if (!(K1 >= 0.0) || !(K2 >= 0.0)) {
    throw DomainError("stopping_bound: constants must be nonnegative");
  }
  return (1.0 + K1 * std::pow(beta, K2) / std::log(1.0 / beta)) * static_cast<double>(n_star);
}

double tail_survival_coin(std::uint64_t n, double delta, double K) {
  return std::exp(-K * static_cast<double>(n) * delta * delta);
}

double refined_coin_sequential_power(std::uint64_t N, double delta, double alpha, double q_N,
                                     double width) {
  const double power = coin_batch_power(N, delta, alpha, width);
  const double n = static_cast<double>(N);
  const double mean = 2.0 * delta * n;
  const double sd = std::sqrt(n * (1.0 - 4.0 * delta * delta));
  if (sd == 0.0) return power;
  const double p_N = batch_hoeffding_threshold(N, alpha, width);
  const double gap = normal_cdf((q_N - mean) / sd) - normal_cdf((p_N - mean) / sd);
  return std::clamp(power - std::max(0.0, gap), 0.0, 1.0);
}

}  // namespace seqtest
