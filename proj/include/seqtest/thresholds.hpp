#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "seqtest/core.hpp"

namespace seqtest {

enum class ThresholdMode {
  sequential_theoretical,
  sequential_practical,
  sequential_oracle,
  batch_hoeffding,
  batch_gaussian,
  batch_empirical_bernstein,
};

std::string_view to_string(ThresholdMode mode);
ThresholdMode threshold_mode_from_string(std::string_view name);

// 6(e - 2): variance factor of the oracle bound.
inline constexpr double kOracleVarianceFactor = 6.0 * (2.718281828459045 - 2.0);

// Rejection rule. The LIL coefficient C sits inside the square root:
//   practical:   q = C0 + sqrt(C * V * ([ln ln]_+ V + ln(1/alpha)))
// so C = 2 is the asymptotically sharp sqrt(2) envelope.
struct ThresholdPolicy {
  ThresholdMode mode = ThresholdMode::sequential_practical;
  double alpha = 0.05;
  double C = 2.0;
  // Additive constant of the practical mode; ln(1/alpha) when unset.
  std::optional<double> C0;
  // Variance inflation of the theoretical mode.
  double C3 = 48.0;
  // When set, the theoretical mode also lower-bounds the inflated variance by
  // 108 ln(4/alpha), the small-variance branch of the variance inversion.
  bool small_variance_floor = false;
  // Known per-step variance (oracle and batch_gaussian modes).
  std::optional<double> V0;
  // Global multiplier applied to every sequential boundary.
  double multiplier = 1.0;
  // Width b - a of the interval holding each increment, for batch_hoeffding.
  // Every increment family here lives in [-1, 1].
  double increment_width = 2.0;

  bool is_sequential() const;
  double additive_constant() const;
  // Throws DomainError on out-of-range fields.
  void validate() const;

  static ThresholdPolicy practical(double alpha, double C = 2.0);
  static ThresholdPolicy theoretical(double alpha, double C3 = 48.0);
  static ThresholdPolicy oracle(double alpha, double V0);
  static ThresholdPolicy hoeffding(double alpha);
  static ThresholdPolicy gaussian(double alpha, double V0);
  static ThresholdPolicy empirical_bernstein(double alpha);
};

// ln ln max(x, e^e).
double iterated_log_plus(double x);

// 3(e-2)e^2 + 2(1 + sqrt(1/3)) ln(8/xi), for xi in (0, 1).
double c0_of_xi(double xi);

// Boundary q_n for the walk's current state. Throws PolicyModeMismatch for
// batch policies.
double sequential_threshold(const WalkState& state, const ThresholdPolicy& policy);

// width * sqrt((N/2) ln(1/alpha)), alpha in (0, 1]. Level alpha for sums of N
// independent increments confined to an interval of the given width.
double batch_hoeffding_threshold(std::uint64_t N, double alpha, double width = 1.0);

// sqrt(V_N0) z_alpha.
double batch_gaussian_threshold(double V_N0, double alpha);

// sqrt(2 Vhat_N ln(2/alpha)) + 7 N ln(2/alpha) / (3(N - 1)), N >= 2.
double batch_empirical_bernstein_threshold(double Vhat_N, std::uint64_t N, double alpha);

// Batch boundary for a completed walk of N steps. The empirical Bernstein
// mode uses N times the unbiased sample variance of the increments.
double batch_threshold(const WalkState& state, const ThresholdPolicy& policy);

// Upper quantile: z with Phi(z) = 1 - p, p in (0, 1).
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace seqtest
