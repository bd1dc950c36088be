#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace seqtest {

// A single data point. After rescale() its Euclidean norm is at most 1/2.
class Observation {
 public:
  Observation() = default;
  explicit Observation(std::vector<double> values) : values_(std::move(values)) {}
  Observation(std::initializer_list<double> values) : values_(values) {}

  std::size_t dimension() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  operator std::span<const double>() const { return values_; }  // NOLINT
  double operator[](std::size_t i) const { return values_[i]; }

  double norm() const;

  friend bool operator==(const Observation&, const Observation&) = default;

 private:
  std::vector<double> values_;
};

// Maps a raw vector with ||raw|| <= bound onto raw / (2 * bound), so the
// result has norm at most 1/2. Throws NormBoundViolated if ||raw|| > bound.
Observation rescale(std::span<const double> raw, double bound);

enum class IncrementFamily { coin, mean, mmd, dcov };

std::string_view to_string(IncrementFamily family);
IncrementFamily family_from_string(std::string_view name);

struct Increment {
  double value = 0.0;
  IncrementFamily family = IncrementFamily::mean;
};

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Running state of the test random walk: step count n, T_n = sum h_i and
// Vhat_n = sum h_i^2. Holds no history.
class WalkState {
 public:
  WalkState() = default;
  WalkState(std::uint64_t n, double sum, double sum_of_squares)
      : n_(n), sum_(sum), sum_of_squares_(sum_of_squares) {}

  std::uint64_t n() const { return n_; }
  double sum() const { return sum_.value(); }
  double sum_of_squares() const { return sum_of_squares_.value(); }

  void add(double h) {
    ++n_;
    sum_.add(h);
    sum_of_squares_.add(h * h);
  }

 private:
  std::uint64_t n_ = 0;
  CompensatedSum sum_;
  CompensatedSum sum_of_squares_;
};

WalkState update_walk(WalkState state, Increment h);

enum class Decision { reject, fail_to_reject };

std::string_view to_string(Decision decision);

struct TestVerdict {
  Decision decision = Decision::fail_to_reject;
  std::uint64_t tau = 0;
  double boundary_at_stop = 0.0;
  double statistic_at_stop = 0.0;
  // Set when the input stream ended before the sample cap.
  bool exhausted = false;

  bool rejected() const { return decision == Decision::reject; }
};

// Ground truth for simulation and closed-form analysis. For the two-sample
// problem Sigma is the average of the two covariance matrices.
struct ProblemSpec {
  Eigen::VectorXd mu1;
  Eigen::VectorXd mu2;
  Eigen::MatrixXd sigma;
  double rho = 0.5;

  Eigen::VectorXd delta() const { return mu1 - mu2; }
  std::size_t dimension() const { return static_cast<std::size_t>(mu1.size()); }

  // ||delta|| / sigma for isotropic Sigma = sigma^2 I.
  double signal_to_noise() const;

  // Throws DomainError if the fields are inconsistent or Sigma is not
  // symmetric positive semidefinite.
  void validate() const;

  // mu1 = 0, mu2 = (shift, 0, ..., 0), Sigma = sigma^2 I_d.
  static ProblemSpec isotropic_gaussian(std::size_t d, double shift, double sigma);
  // Coin with P(heads) = 1/2 + bias.
  static ProblemSpec coin(double bias);
};

}  // namespace seqtest
