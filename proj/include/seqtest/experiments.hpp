#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/engine.hpp"
#include "seqtest/thresholds.hpp"

namespace seqtest {

enum class ExperimentKind {
  type1_coin,
  type1_gaussian,
  power_curve,
  stopping_distribution,
  moment_check,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string_view name);

// Monte Carlo experiment description. Gaussian experiments draw
// X ~ N(0, sigma^2 I_d), Y ~ N((delta, 0, ..., 0), sigma^2 I_d); coin
// experiments flip with P(heads) = 1/2 + delta (type1_coin uses rho).
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::type1_coin;
  // coin or mean; type1_* experiments fix it.
  IncrementFamily family = IncrementFamily::mean;

  std::vector<double> deltas{0.0};
  std::size_t d = 10;
  double sigma = 1.0;
  double rho = 0.5;

  ThresholdPolicy policy;
  // One-sided comparator for power_curve. Defaults to the known-variance gaussian test
  // for the mean family and Hoeffding for the coin.
  std::optional<ThresholdPolicy> batch_policy;
  std::optional<Sidedness> sidedness;

  std::uint64_t N_max = 10'000;
  std::uint64_t trials = 1'000;
  std::vector<double> alpha_grid;
  // power_curve batch sizes / moment_check walk length.
  std::vector<std::uint64_t> n_grid;
  std::uint64_t seed = 0;
  std::string output_path;
  std::size_t checkpoints = 50;
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;

  Sidedness effective_sidedness() const;
  ThresholdPolicy effective_batch_policy() const;
  // Throws ConfigError.
  void validate() const;
  // Trial counts and horizons of the full-size published protocols.
  void apply_paper_scale();
};

struct Type1Row {
  double alpha = 0.0;
  std::uint64_t n = 0;
  double cum_reject_frac = 0.0;
  double stderr_ = 0.0;
};

struct PowerRow {
  double delta = 0.0;
  std::uint64_t N = 0;
  double seq_power = 0.0;
  double batch_power_emp = 0.0;
  double batch_power_pred = 0.0;
  // Larger of the two binomial standard errors of the empirical powers.
  double stderr_ = 0.0;
};

struct StoppingRow {
  double delta = 0.0;
  double q10 = 0.0, q25 = 0.0, q50 = 0.0, q75 = 0.0, q90 = 0.0;
  double reject_frac = 0.0;
  double mean_tau = 0.0;
};

struct StoppingResult {
  std::vector<StoppingRow> rows;
  // Least-squares slope of ln(median tau) against ln(1/delta) over cells
  // that rejected in at least 99% of trials.
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::vector<double> fitted_deltas;
};

struct MomentRow {
  double delta = 0.0;
  std::uint64_t n = 0;
  double mean_T = 0.0;
  double var_T = 0.0;
  double expected_mean = 0.0;
  double expected_var = 0.0;
  double mean_rel_error = 0.0;
  double var_rel_error = 0.0;
};

// Stopping times of `trials` independent sequential tests at one alternative.
struct StoppingSample {
  std::vector<std::uint64_t> tau;
  std::vector<bool> rejected;
};

// Geometric grid of `count` distinct integers in [1, n_max], ending at n_max.
std::vector<std::uint64_t> log_grid(std::uint64_t n_max, std::size_t count);

// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> sample, double p);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// Runs fn(i) for i in [0, count) on a pool of threads and returns the results
// in index order.
template <typename F>
auto map_trials(std::uint64_t count, unsigned threads, F&& fn) {
  using R = decltype(fn(std::uint64_t{0}));
  std::vector<R> out(count);
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < count; i += workers) out[i] = fn(i);
    });
  }
  pool.clear();
  return out;
}

StoppingSample collect_stopping_times(const ExperimentConfig& config, double delta);

std::vector<Type1Row> run_type1_experiment(const ExperimentConfig& config);
std::vector<PowerRow> run_power_experiment(const ExperimentConfig& config);
StoppingResult run_stopping_experiment(const ExperimentConfig& config);
std::vector<MomentRow> run_moment_check(const ExperimentConfig& config);

void write_csv(std::ostream& out, const std::vector<Type1Row>& rows);
void write_csv(std::ostream& out, const std::vector<PowerRow>& rows);
void write_csv(std::ostream& out, const StoppingResult& result);
void write_csv(std::ostream& out, const std::vector<MomentRow>& rows);

// %.9g
std::string format_real(double x);

}  // namespace seqtest
