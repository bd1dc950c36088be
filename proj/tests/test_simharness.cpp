#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "seqtest/analysis.hpp"
#include "seqtest/errors.hpp"
#include "seqtest/experiments.hpp"
#include "seqtest/generators.hpp"

namespace seqtest {
namespace {

template <typename Stream>
std::vector<double> draw(Stream stream, std::size_t n) {
  std::vector<double> out(n);
  for (double& h : out) h = stream()->value;
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

TEST(CounterRng, SubstreamsDifferAndRepeat) {
  CounterRng a = CounterRng::substream(1, 0), b = CounterRng::substream(1, 1);
  CounterRng a2 = CounterRng::substream(1, 0), c = CounterRng::substream(2, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a(), y = b(), z = c();
    EXPECT_EQ(x, a2());
    seen.insert(x);
    seen.insert(y);
    seen.insert(z);
  }
  EXPECT_EQ(seen.size(), 3000u);
}

TEST(CounterRng, UniformInUnitInterval) {
  CounterRng rng(5);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / 100000.0));
}

TEST(GenCoinStream, Examples) {
  for (double h : draw(gen_coin_stream(1.0, 3), 1000)) ASSERT_EQ(h, 1.0);
  const auto fair = draw(gen_coin_stream(0.5, 4), 100000);
  EXPECT_LE(std::abs(mean_of(fair)), 3.0 / std::sqrt(100000.0));
  const auto biased = draw(gen_coin_stream(0.6, 5), 100000);
  // Var A = 1 - (2 rho - 1)^2 = 0.96.
  EXPECT_NEAR(mean_of(biased), 0.2, 3.0 * std::sqrt(0.96 / 100000.0));
  EXPECT_THROW(gen_coin_stream(1.5, 0), DomainError);
}

TEST(GenGaussianPairStream, NullMeanAndVariance) {
  const auto hs = draw(gen_gaussian_pair_stream(10, 0.0, 1.0, 6), 100000);
  const double var = variance_of(hs);
  EXPECT_LE(std::abs(mean_of(hs)), 3.0 * std::sqrt(var / 100000.0));
  EXPECT_NEAR(var / 40.0, 1.0, 0.05);
}

TEST(GenGaussianPairStream, AlternativeVariance) {
  // 4 sigma^4 d + 4 delta^2 sigma^2 with sigma = 1.5, delta = 2, d = 4.
  const auto hs = draw(gen_gaussian_pair_stream(4, 2.0, 1.5, 7), 100000);
  const double expected = 4.0 * std::pow(1.5, 4) * 4.0 + 4.0 * 4.0 * 1.5 * 1.5;
  EXPECT_NEAR(variance_of(hs) / expected, 1.0, 0.05);
  EXPECT_NEAR(mean_of(hs), 4.0, 3.0 * std::sqrt(expected / 100000.0));
}

TEST(GenGaussianPairStream, Deterministic) {
  EXPECT_EQ(draw(gen_gaussian_pair_stream(10, 0.3, 1.0, 8), 100),
            draw(gen_gaussian_pair_stream(10, 0.3, 1.0, 8), 100));
  EXPECT_NE(draw(gen_gaussian_pair_stream(10, 0.3, 1.0, 8), 100),
            draw(gen_gaussian_pair_stream(10, 0.3, 1.0, 9), 100));
}

TEST(DependentPairStream, IndependenceAndDependence) {
  const auto null = draw(DependentPairStream(2, 0.0, CounterRng(1)), 50000);
  EXPECT_LE(std::abs(mean_of(null)), 3.0 * std::sqrt(variance_of(null) / 50000.0));
  const auto dep = draw(DependentPairStream(2, 0.8, CounterRng(2)), 50000);
  EXPECT_GT(mean_of(dep), 5.0 * std::sqrt(variance_of(dep) / 50000.0));
}

TEST(LogGrid, Shape) {
  const auto grid = log_grid(10000, 50);
  EXPECT_EQ(grid.front(), 1u);
  EXPECT_EQ(grid.back(), 10000u);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
  EXPECT_GE(grid.size(), 40u);
  EXPECT_EQ(log_grid(5, 50), (std::vector<std::uint64_t>{1, 2, 3, 4, 5}));
}

TEST(Quantile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile({4.0, 1.0, 3.0, 2.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4.0, 1.0, 3.0, 2.0}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile({4.0, 1.0, 3.0, 2.0}, 1.0), 4.0);
  EXPECT_TRUE(std::isnan(quantile({}, 0.5)));
}

TEST(LeastSquares, ExactLine) {
  const LinearFit fit = least_squares({1.0, 2.0, 3.0, 4.0}, {3.0, 5.0, 7.0, 9.0});
  EXPECT_NEAR(fit.slope, 2.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
  EXPECT_NEAR(fit.slope_stderr, 0.0, 1e-12);
  EXPECT_THROW(least_squares({1.0}, {1.0}), DomainError);
}

TEST(MapTrials, OrderIndependentOfThreadCount) {
  auto fn = [](std::uint64_t i) { return CounterRng::substream(3, i)(); };
  EXPECT_EQ(map_trials(1000, 1, fn), map_trials(1000, 4, fn));
}

ExperimentConfig type1_coin_config() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::type1_coin;
  c.alpha_grid = {0.05, 0.1};
  c.N_max = 2000;
  c.trials = 500;
  c.seed = 11;
  return c;
}

TEST(Type1Experiment, CurvesAreCumulative) {
  const auto rows = run_type1_experiment(type1_coin_config());
  ASSERT_FALSE(rows.empty());
  double previous = 0.0, alpha = rows.front().alpha;
  for (const auto& r : rows) {
    if (r.alpha != alpha) {
      alpha = r.alpha;
      previous = 0.0;
    }
    EXPECT_GE(r.cum_reject_frac, previous);
    EXPECT_GE(r.cum_reject_frac, 0.0);
    EXPECT_LE(r.cum_reject_frac, 1.0);
    previous = r.cum_reject_frac;
  }
  EXPECT_EQ(rows.back().n, 2000u);
}

TEST(Type1Experiment, RejectsNonNullConfig) {
  ExperimentConfig c = type1_coin_config();
  c.rho = 0.6;
  EXPECT_THROW(run_type1_experiment(c), ConfigError);
  c = type1_coin_config();
  c.experiment = ExperimentKind::type1_gaussian;
  c.deltas = {0.5};
  EXPECT_THROW(run_type1_experiment(c), ConfigError);
}

// The practical constants with C = 2.2 keep the terminal type I error under
// half the nominal level.
TEST(Type1Experiment, WiderConstantHalvesViolations) {
  ExperimentConfig c = type1_coin_config();
  c.alpha_grid = {0.05, 0.1, 0.2};
  c.policy.C = 2.2;
  c.N_max = 10000;
  c.trials = 4000;
  for (const auto& r : run_type1_experiment(c)) {
    if (r.n == c.N_max) EXPECT_LE(r.cum_reject_frac, r.alpha / 2.0) << r.alpha;
  }
}

TEST(Type1Experiment, ReproducibleAcrossThreadCounts) {
  ExperimentConfig c = type1_coin_config();
  c.threads = 1;
  std::ostringstream a, b;
  write_csv(a, run_type1_experiment(c));
  c.threads = 3;
  write_csv(b, run_type1_experiment(c));
  EXPECT_EQ(a.str(), b.str());
}

ExperimentConfig power_config() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::power_curve;
  c.family = IncrementFamily::mean;
  c.deltas = {0.0, 0.5, 1.0};
  c.n_grid = {50, 200, 800};
  c.N_max = 800;
  c.trials = 400;
  c.seed = 12;
  return c;
}

TEST(PowerExperiment, NullColumnAndOrdering) {
  const auto rows = run_power_experiment(power_config());
  ASSERT_EQ(rows.size(), 9u);
  double previous_seq = 0.0, delta = -1.0;
  for (const auto& r : rows) {
    if (r.delta != delta) {
      delta = r.delta;
      previous_seq = 0.0;
    }
    EXPECT_GE(r.seq_power, previous_seq);
    previous_seq = r.seq_power;
    EXPECT_LE(r.seq_power, r.batch_power_emp + 2.0 * r.stderr_ + 1e-12);
    for (double p : {r.seq_power, r.batch_power_emp, r.batch_power_pred}) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
    if (r.delta == 0.0) {
      const double se = std::sqrt(0.05 * 0.95 / 400.0);
      EXPECT_LE(r.seq_power, 0.05 + 2.0 * se);
      EXPECT_NEAR(r.batch_power_emp, 0.05, 2.0 * se + 0.01);
      EXPECT_NEAR(r.batch_power_pred, 0.05, 1e-12);
    }
  }
}

TEST(PowerExperiment, CoinUsesExactPrediction) {
  ExperimentConfig c = power_config();
  c.family = IncrementFamily::coin;
  c.deltas = {0.1};
  const auto rows = run_power_experiment(c);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.batch_power_emp, r.batch_power_pred, 3.0 * r.stderr_ + 0.02);
  }
}

TEST(StoppingExperiment, CoinSlopeAndCsv) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::stopping_distribution;
  c.family = IncrementFamily::coin;
  c.deltas = {0.37, 0.22, 0.14};
  c.trials = 300;
  c.seed = 13;
  const StoppingResult result = run_stopping_experiment(c);
  EXPECT_NEAR(result.slope, 2.0, 0.3);
  EXPECT_EQ(result.fitted_deltas.size(), 3u);
  for (const auto& r : result.rows) {
    EXPECT_LE(r.q10, r.q25);
    EXPECT_LE(r.q25, r.q50);
    EXPECT_LE(r.q50, r.q75);
    EXPECT_LE(r.q75, r.q90);
    EXPECT_GE(r.q10, 1.0);
    EXPECT_LE(r.q90, static_cast<double>(c.N_max));
  }
  std::ostringstream csv;
  write_csv(csv, result);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "delta,q10,q25,q50,q75,q90,reject_frac");
}

TEST(StoppingExperiment, CensoredCellsAreExcluded) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::stopping_distribution;
  c.family = IncrementFamily::coin;
  c.deltas = {0.37, 0.22, 0.01};
  c.N_max = 2000;
  c.trials = 200;
  const StoppingResult result = run_stopping_experiment(c);
  EXPECT_EQ(result.fitted_deltas, (std::vector<double>{0.37, 0.22}));
  EXPECT_TRUE(std::isnan(result.slope_stderr));
  c.deltas = {0.37, 0.01};
  EXPECT_THROW(run_stopping_experiment(c), InsufficientRejections);
}

// Median tau sits within a factor 4 of the oracle sample size at beta = 1/2.
TEST(StoppingExperiment, MedianNearOracleSampleSize) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::stopping_distribution;
  c.family = IncrementFamily::mean;
  c.deltas = {2.5, 2.0, 1.6, 1.28};
  c.trials = 200;
  c.seed = 14;
  const StoppingResult result = run_stopping_experiment(c);
  for (const auto& r : result.rows) {
    const auto n_star =
        oracle_sample_size(ProblemSpec::isotropic_gaussian(10, r.delta, 1.0), 0.05, 0.5);
    EXPECT_LE(r.q50, 4.0 * static_cast<double>(n_star)) << r.delta;
  }
}

TEST(MomentCheck, MatchesClosedForm) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::moment_check;
  c.deltas = {0.0, 1.0};
  c.trials = 10000;
  c.seed = 15;
  const auto rows = run_moment_check(c);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_LE(std::abs(rows[0].mean_T), 3.0 * std::sqrt(100.0 * 40.0 / 10000.0));
  EXPECT_TRUE(std::isnan(rows[0].mean_rel_error));
  EXPECT_LE(rows[0].var_rel_error, 0.05);
  EXPECT_LE(rows[1].mean_rel_error, 0.05);
  EXPECT_LE(rows[1].var_rel_error, 0.05);
}

TEST(WriteCsv, HeadersAndNineDigits) {
  std::ostringstream type1, power;
  write_csv(type1, std::vector<Type1Row>{{0.05, 10, 1.0 / 3.0, 0.0}});
  EXPECT_EQ(type1.str(), "alpha,n,cum_reject_frac,stderr\n0.05,10,0.333333333,0\n");
  write_csv(power, std::vector<PowerRow>{{1.0, 20, 0.5, 0.25, 2.0 / 3.0, 0.125}});
  EXPECT_EQ(power.str(),
            "delta,N,seq_power,batch_power_emp,batch_power_pred,stderr\n"
            "1,20,0.5,0.25,0.666666667,0.125\n");
}

TEST(ExperimentConfig, PaperScale) {
  ExperimentConfig c = type1_coin_config();
  c.apply_paper_scale();
  EXPECT_EQ(c.trials, 10000u);
  EXPECT_EQ(c.N_max, 100000u);
  c.experiment = ExperimentKind::power_curve;
  c.apply_paper_scale();
  EXPECT_EQ(c.trials, 1000u);
  EXPECT_EQ(c.N_max, 50000u);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig c;
  c.trials = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.deltas.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.experiment = ExperimentKind::power_curve;
  c.family = IncrementFamily::dcov;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace seqtest
