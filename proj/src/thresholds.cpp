#include "seqtest/thresholds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "seqtest/errors.hpp"

namespace seqtest {
namespace {

constexpr double kE = std::numbers::e;

void require_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(where) + ": alpha must lie in (0, 1)");
  }
}

}  // namespace

std::string_view to_string(ThresholdMode mode) {
  switch (mode) {
    case ThresholdMode::sequential_theoretical:
      return "sequential_theoretical";
    case ThresholdMode::sequential_practical:
      return "sequential_practical";
    case ThresholdMode::sequential_oracle:
      return "sequential_oracle";
    case ThresholdMode::batch_hoeffding:
      return "batch_hoeffding";
    case ThresholdMode::batch_gaussian:
      return "batch_gaussian";
    case ThresholdMode::batch_empirical_bernstein:
      return "batch_empirical_bernstein";
  }
  return "unknown";
}

ThresholdMode threshold_mode_from_string(std::string_view name) {
  for (auto mode : {ThresholdMode::sequential_theoretical, ThresholdMode::sequential_practical,
                    ThresholdMode::sequential_oracle, ThresholdMode::batch_hoeffding,
                    ThresholdMode::batch_gaussian, ThresholdMode::batch_empirical_bernstein}) {
    if (to_string(mode) == name) return mode;
  }
  throw ConfigError("unknown threshold mode '" + std::string(name) + "'");
}

bool ThresholdPolicy::is_sequential() const {
  return mode == ThresholdMode::sequential_theoretical ||
         mode == ThresholdMode::sequential_practical ||
         mode == ThresholdMode::sequential_oracle;
}

double ThresholdPolicy::additive_constant() const {
  return C0.value_or(std::log(1.0 / alpha));
}

void ThresholdPolicy::validate() const {
  require_alpha(alpha, "ThresholdPolicy");
  if (!(C > 0.0)) throw DomainError("ThresholdPolicy: C must be positive");
  if (!(C3 > 0.0)) throw DomainError("ThresholdPolicy: C3 must be positive");
  if (!(multiplier > 0.0)) throw DomainError("ThresholdPolicy: multiplier must be positive");
  if (!(increment_width > 0.0)) {
    throw DomainError("ThresholdPolicy: increment_width must be positive");
  }
  if ((mode == ThresholdMode::sequential_oracle || mode == ThresholdMode::batch_gaussian) &&
      !V0.has_value()) {
    throw DomainError("ThresholdPolicy: mode " + std::string(to_string(mode)) +
                      " requires the known variance V0");
  }
  if (V0.has_value() && !(*V0 >= 0.0)) {
    throw DomainError("ThresholdPolicy: V0 must be nonnegative");
  }
}

ThresholdPolicy ThresholdPolicy::practical(double alpha, double C) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::sequential_practical;
  p.alpha = alpha;
  p.C = C;
  return p;
}

ThresholdPolicy ThresholdPolicy::theoretical(double alpha, double C3) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::sequential_theoretical;
  p.alpha = alpha;
  p.C3 = C3;
  return p;
}

ThresholdPolicy ThresholdPolicy::oracle(double alpha, double V0) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::sequential_oracle;
  p.alpha = alpha;
  p.V0 = V0;
  return p;
}

ThresholdPolicy ThresholdPolicy::hoeffding(double alpha) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::batch_hoeffding;
  p.alpha = alpha;
  return p;
}

ThresholdPolicy ThresholdPolicy::gaussian(double alpha, double V0) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::batch_gaussian;
  p.alpha = alpha;
  p.V0 = V0;
  return p;
}

ThresholdPolicy ThresholdPolicy::empirical_bernstein(double alpha) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::batch_empirical_bernstein;
  p.alpha = alpha;
  return p;
}

double iterated_log_plus(double x) {
  static const double floor = std::exp(kE);
  return std::log(std::log(std::max(x, floor)));
}

double c0_of_xi(double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("c0_of_xi: xi must lie in (0, 1)");
  return 3.0 * (kE - 2.0) * kE * kE +
         2.0 * (1.0 + std::sqrt(1.0 / 3.0)) * std::log(8.0 / xi);
}

double sequential_threshold(const WalkState& state, const ThresholdPolicy& policy) {
  const double alpha = policy.alpha;
  double q = 0.0;
  switch (policy.mode) {
    case ThresholdMode::sequential_practical: {
      const double v = state.sum_of_squares();
      q = policy.additive_constant() +
          std::sqrt(policy.C * v * (iterated_log_plus(v) + std::log(1.0 / alpha)));
      break;
    }
    case ThresholdMode::sequential_theoretical: {
      const double c0 = c0_of_xi(alpha);
      double inflated = policy.C3 * (state.sum_of_squares() + c0);
      if (policy.small_variance_floor) {
        inflated = std::max(inflated, 108.0 * std::log(4.0 / alpha));
      }
      q = c0 + std::sqrt(2.0 * inflated *
                         (iterated_log_plus(inflated) + std::log(4.0 / alpha)));
      break;
    }
    case ThresholdMode::sequential_oracle: {
      if (!policy.V0) throw DomainError("sequential_oracle requires V0");
      const double v = static_cast<double>(state.n()) * *policy.V0;
      const double c1 = kOracleVarianceFactor;
      q = c0_of_xi(alpha) +
          std::sqrt(2.0 * c1 * v * iterated_log_plus(v) + c1 * v * std::log(4.0 / alpha));
      break;
    }
    default:
      throw PolicyModeMismatch("sequential_threshold called with batch mode " +
                               std::string(to_string(policy.mode)));
  }
  return policy.multiplier * q;
}

double batch_hoeffding_threshold(std::uint64_t N, double alpha, double width) {
  if (N < 1) throw DomainError("batch_hoeffding_threshold: N must be >= 1");
  if (!(width > 0.0)) throw DomainError("batch_hoeffding_threshold: width must be > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("batch_hoeffding_threshold: alpha must lie in (0, 1]");
  }
  return width * std::sqrt(0.5 * static_cast<double>(N) * std::log(1.0 / alpha));
}

double batch_gaussian_threshold(double V_N0, double alpha) {
  if (!(V_N0 >= 0.0)) throw DomainError("batch_gaussian_threshold: V_N0 must be >= 0");
  require_alpha(alpha, "batch_gaussian_threshold");
  return std::sqrt(V_N0) * normal_quantile(alpha);
}

double batch_empirical_bernstein_threshold(double Vhat_N, std::uint64_t N, double alpha) {
  if (N < 2) throw DomainError("batch_empirical_bernstein_threshold: N must be >= 2");
  if (!(Vhat_N >= 0.0)) throw DomainError("batch_empirical_bernstein_threshold: Vhat_N must be >= 0");
  require_alpha(alpha, "batch_empirical_bernstein_threshold");
  const double log_term = std::log(2.0 / alpha);
  const double n = static_cast<double>(N);
  return std::sqrt(2.0 * Vhat_N * log_term) + 7.0 * n * log_term / (3.0 * (n - 1.0));
}

double batch_threshold(const WalkState& state, const ThresholdPolicy& policy) {
  switch (policy.mode) {
    case ThresholdMode::batch_hoeffding:
      return batch_hoeffding_threshold(state.n(), policy.alpha, policy.increment_width);
    case ThresholdMode::batch_gaussian:
      if (!policy.V0) throw DomainError("batch_gaussian requires V0");
      return batch_gaussian_threshold(static_cast<double>(state.n()) * *policy.V0, policy.alpha);
    case ThresholdMode::batch_empirical_bernstein: {
      if (state.n() < 2) throw DomainError("batch_empirical_bernstein needs N >= 2");
      const double n = static_cast<double>(state.n());
      const double centered = std::max(
          0.0, state.sum_of_squares() - state.sum() * state.sum() / n);
      return batch_empirical_bernstein_threshold(n * centered / (n - 1.0), state.n(),
                                                 policy.alpha);
    }
    default:
      throw PolicyModeMismatch("batch_threshold called with sequential mode " +
                               std::string(to_string(policy.mode)));
  }
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace seqtest
