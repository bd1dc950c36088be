#include "seqtest/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "seqtest/analysis.hpp"
#include "seqtest/errors.hpp"
#include "seqtest/generators.hpp"
#include "seqtest/rng.hpp"

namespace seqtest {
namespace {

struct TrialOutcome {
  std::uint64_t tau = 0;
  bool rejected = false;
};

bool is_type1(ExperimentKind kind) {
  return kind == ExperimentKind::type1_coin || kind == ExperimentKind::type1_gaussian;
}

IncrementFamily effective_family(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::type1_coin:
      return IncrementFamily::coin;
    case ExperimentKind::type1_gaussian:
    case ExperimentKind::moment_check:
      return IncrementFamily::mean;
    default:
      return config.family;
  }
}

// Calls fn with the increment stream of one trial at one grid point.
template <typename F>
auto with_stream(const ExperimentConfig& config, double delta, std::uint64_t trial, F&& fn) {
  const CounterRng rng = CounterRng::substream(config.seed, trial);
  if (effective_family(config) == IncrementFamily::coin) {
    const double rho =
        config.experiment == ExperimentKind::type1_coin ? config.rho : 0.5 + delta;
    CoinStream stream(rho, rng);
    return fn(stream);
  }
  GaussianPairStream stream(config.d, delta, config.sigma, rng);
  return fn(stream);
}

ThresholdPolicy policy_at_alpha(const ThresholdPolicy& base, double alpha) {
  ThresholdPolicy p = base;
  p.alpha = alpha;
  return p;
}

double binomial_stderr(double p, std::uint64_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::type1_coin:
      return "type1_coin";
    case ExperimentKind::type1_gaussian:
      return "type1_gaussian";
    case ExperimentKind::power_curve:
      return "power_curve";
    case ExperimentKind::stopping_distribution:
      return "stopping_distribution";
    case ExperimentKind::moment_check:
      return "moment_check";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string_view name) {
  for (auto kind : {ExperimentKind::type1_coin, ExperimentKind::type1_gaussian,
                    ExperimentKind::power_curve, ExperimentKind::stopping_distribution,
                    ExperimentKind::moment_check}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

Sidedness ExperimentConfig::effective_sidedness() const {
  return sidedness.value_or(default_sidedness(effective_family(*this)));
}

ThresholdPolicy ExperimentConfig::effective_batch_policy() const {
  if (batch_policy) return *batch_policy;
  if (effective_family(*this) == IncrementFamily::coin) {
    return ThresholdPolicy::hoeffding(policy.alpha);
  }
  const ProblemSpec null_spec = ProblemSpec::isotropic_gaussian(d, 0.0, sigma);
  return ThresholdPolicy::gaussian(policy.alpha, mean_increment_moments(null_spec).null_variance);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (deltas.empty()) throw ConfigError("delta grid must be nonempty");
  if (N_max < 1) throw ConfigError("N_max must be >= 1");
  const IncrementFamily family_used = effective_family(*this);
  if (family_used != IncrementFamily::coin && family_used != IncrementFamily::mean) {
    throw ConfigError("experiments support the coin and mean families only");
  }
  if (family_used == IncrementFamily::mean) {
    if (d < 1) throw ConfigError("d must be >= 1");
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  }
  try {
    policy.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("policy: ") + e.what());
  }
  if (experiment != ExperimentKind::moment_check && !policy.is_sequential()) {
    throw ConfigError("policy must use a sequential threshold mode");
  }
  for (double a : alpha_grid) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha_grid entries must lie in (0, 1)");
  }
  if (family_used == IncrementFamily::coin) {
    for (double delta : deltas) {
      if (!(delta >= 0.0 && delta <= 0.5)) {
        throw ConfigError("coin deltas must lie in [0, 1/2]");
      }
    }
  }
  if (experiment == ExperimentKind::type1_coin && rho != 0.5) {
    throw ConfigError("type1_coin requires the fair coin rho = 1/2");
  }
  if (experiment == ExperimentKind::type1_gaussian) {
    for (double delta : deltas) {
      if (delta != 0.0) throw ConfigError("type1_gaussian requires delta = 0");
    }
  }
  for (auto n : n_grid) {
    if (n < 1 || (experiment == ExperimentKind::power_curve && n > N_max)) {
      throw ConfigError("n_grid entries must lie in [1, N_max]");
    }
  }
}

void ExperimentConfig::apply_paper_scale() {
  switch (experiment) {
    case ExperimentKind::type1_coin:
    case ExperimentKind::type1_gaussian:
      trials = 10'000;
      N_max = 100'000;
      break;
    case ExperimentKind::power_curve:
    case ExperimentKind::stopping_distribution:
      trials = 1'000;
      N_max = 50'000;
      break;
    case ExperimentKind::moment_check:
      trials = 100'000;
      break;
  }
}

std::vector<std::uint64_t> log_grid(std::uint64_t n_max, std::size_t count) {
  std::vector<std::uint64_t> grid;
  if (n_max == 0 || count == 0) return grid;
  const double top = std::log(static_cast<double>(n_max));
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    auto n = static_cast<std::uint64_t>(std::llround(std::exp(frac * top)));
    n = std::clamp<std::uint64_t>(n, 1, n_max);
    if (grid.empty() || n > grid.back()) grid.push_back(n);
  }
  if (grid.back() != n_max) grid.push_back(n_max);
  return grid;
}

double quantile(std::vector<double> sample, double p) {
  if (sample.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(sample.begin(), sample.end());
  const double pos = p * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sample[lo] + frac * (sample[hi] - sample[lo]);
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("least_squares: need at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("least_squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  } else {
    fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

StoppingSample collect_stopping_times(const ExperimentConfig& config, double delta) {
  const Sidedness sided = config.effective_sidedness();
  const auto outcomes = map_trials(config.trials, config.threads, [&](std::uint64_t trial) {
    return with_stream(config, delta, trial, [&](auto& stream) {
      const TestVerdict v = run_sequential(stream, config.policy, config.N_max, sided);
      return TrialOutcome{v.tau, v.rejected()};
    });
  });
  StoppingSample sample;
  sample.tau.reserve(outcomes.size());
  sample.rejected.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    sample.tau.push_back(o.tau);
    sample.rejected.push_back(o.rejected);
  }
  return sample;
}

std::vector<Type1Row> run_type1_experiment(const ExperimentConfig& config) {
  if (!is_type1(config.experiment)) {
    throw ConfigError("run_type1_experiment needs a type1_coin or type1_gaussian config");
  }
  config.validate();
  const std::vector<double> alphas =
      config.alpha_grid.empty() ? std::vector<double>{config.policy.alpha} : config.alpha_grid;
  const std::vector<std::uint64_t> grid = log_grid(config.N_max, config.checkpoints);
  const Sidedness sided = config.effective_sidedness();
  const double delta = config.deltas.front();

  std::vector<Type1Row> rows;
  for (double alpha : alphas) {
    const ThresholdPolicy policy = policy_at_alpha(config.policy, alpha);
    const auto outcomes = map_trials(config.trials, config.threads, [&](std::uint64_t trial) {
      return with_stream(config, delta, trial, [&](auto& stream) {
        const TestVerdict v = run_sequential(stream, policy, config.N_max, sided);
        return TrialOutcome{v.tau, v.rejected()};
      });
    });
    // Crossings are detected at every step; the curve is sampled on the grid.
    std::vector<std::uint64_t> rejections_by_step(config.N_max + 1, 0);
    for (const auto& o : outcomes) {
      if (o.rejected) ++rejections_by_step[o.tau];
    }
    std::uint64_t cumulative = 0;
    std::uint64_t step = 0;
    for (std::uint64_t n : grid) {
      while (step < n) cumulative += rejections_by_step[++step];
      const double frac = static_cast<double>(cumulative) / static_cast<double>(config.trials);
      rows.push_back({alpha, n, frac, binomial_stderr(frac, config.trials)});
    }
  }
  return rows;
}

std::vector<PowerRow> run_power_experiment(const ExperimentConfig& config) {
  if (config.experiment != ExperimentKind::power_curve) {
    throw ConfigError("run_power_experiment needs a power_curve config");
  }
  config.validate();
  std::vector<std::uint64_t> grid =
      config.n_grid.empty() ? log_grid(config.N_max, 12) : config.n_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const std::uint64_t horizon = grid.back();
  const Sidedness sided = config.effective_sidedness();
  const ThresholdPolicy batch = config.effective_batch_policy();
  const bool coin = effective_family(config) == IncrementFamily::coin;
  const double alpha = config.policy.alpha;

  struct PowerTrial {
    TrialOutcome sequential;
    std::vector<char> batch_rejects;
  };

  std::vector<PowerRow> rows;
  for (double delta : config.deltas) {
    const auto trials = map_trials(config.trials, config.threads, [&](std::uint64_t trial) {
      return with_stream(config, delta, trial, [&](auto& stream) {
        SequentialTest test(config.policy, horizon, sided);
        WalkState batch_walk;
        PowerTrial out;
        out.batch_rejects.assign(grid.size(), 0);
        std::size_t next = 0;
        for (std::uint64_t n = 1; n <= horizon; ++n) {
          const Increment h = *stream();
          if (!test.decided()) test.step(h);
          batch_walk.add(h.value);
          if (grid[next] == n) {
            // The batch boundaries are one-sided rules at level alpha.
            out.batch_rejects[next] =
                batch_walk.sum() > batch_threshold(batch_walk, batch) ? 1 : 0;
            ++next;
          }
        }
        const TestVerdict v = test.verdict();
        out.sequential = {v.tau, v.rejected()};
        return out;
      });
    });
    const ProblemSpec spec = ProblemSpec::isotropic_gaussian(config.d, delta, config.sigma);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      std::uint64_t seq = 0, bat = 0;
      for (const auto& t : trials) {
        if (t.sequential.rejected && t.sequential.tau <= grid[j]) ++seq;
        bat += static_cast<std::uint64_t>(t.batch_rejects[j]);
      }
      PowerRow row;
      row.delta = delta;
      row.N = grid[j];
      row.seq_power = static_cast<double>(seq) / static_cast<double>(config.trials);
      row.batch_power_emp = static_cast<double>(bat) / static_cast<double>(config.trials);
      row.batch_power_pred =
          coin ? coin_batch_power(grid[j], delta, alpha, batch.increment_width)
               : batch_power(grid[j], spec, alpha);
      row.stderr_ = std::max(binomial_stderr(row.seq_power, config.trials),
                             binomial_stderr(row.batch_power_emp, config.trials));
      rows.push_back(row);
    }
  }
  return rows;
}

StoppingResult run_stopping_experiment(const ExperimentConfig& config) {
  if (config.experiment != ExperimentKind::stopping_distribution) {
    throw ConfigError("run_stopping_experiment needs a stopping_distribution config");
  }
  config.validate();
  StoppingResult result;
  std::vector<double> xs, ys;
  for (double delta : config.deltas) {
    const StoppingSample sample = collect_stopping_times(config, delta);
    std::vector<double> taus(sample.tau.begin(), sample.tau.end());
    StoppingRow row;
    row.delta = delta;
    row.q10 = quantile(taus, 0.10);
    row.q25 = quantile(taus, 0.25);
    row.q50 = quantile(taus, 0.50);
    row.q75 = quantile(taus, 0.75);
    row.q90 = quantile(taus, 0.90);
    row.mean_tau = std::accumulate(taus.begin(), taus.end(), 0.0) / static_cast<double>(taus.size());
    row.reject_frac =
        static_cast<double>(std::count(sample.rejected.begin(), sample.rejected.end(), true)) /
        static_cast<double>(config.trials);
    result.rows.push_back(row);
    // Censored cells would bias the slope; leave them out of the fit.
    if (row.reject_frac >= 0.99 && delta > 0.0) {
      xs.push_back(std::log(1.0 / delta));
      ys.push_back(std::log(row.q50));
      result.fitted_deltas.push_back(delta);
    }
  }
  if (xs.size() < 2) {
    throw InsufficientRejections(
        "run_stopping_experiment: fewer than two delta cells rejected in >= 99% of trials");
  }
  const LinearFit fit = least_squares(xs, ys);
  result.slope = fit.slope;
  result.slope_stderr = fit.slope_stderr;
  return result;
}

std::vector<MomentRow> run_moment_check(const ExperimentConfig& config) {
  if (config.experiment != ExperimentKind::moment_check) {
    throw ConfigError("run_moment_check needs a moment_check config");
  }
  config.validate();
  const std::uint64_t n = config.n_grid.empty() ? 100 : config.n_grid.front();
  std::vector<MomentRow> rows;
  for (double delta : config.deltas) {
    const auto sums = map_trials(config.trials, config.threads, [&](std::uint64_t trial) {
      return with_stream(config, delta, trial, [&](auto& stream) {
        CompensatedSum total;
        for (std::uint64_t i = 0; i < n; ++i) total.add(stream()->value);
        return total.value();
      });
    });
    CompensatedSum s1;
    for (double t : sums) s1.add(t);
    const double mean = s1.value() / static_cast<double>(sums.size());
    CompensatedSum s2;
    for (double t : sums) s2.add((t - mean) * (t - mean));
    const double var = sums.size() > 1 ? s2.value() / static_cast<double>(sums.size() - 1) : 0.0;

    const IncrementMoments m =
        mean_increment_moments(ProblemSpec::isotropic_gaussian(config.d, delta, config.sigma));
    MomentRow row;
    row.delta = delta;
    row.n = n;
    row.mean_T = mean;
    row.var_T = var;
    row.expected_mean = static_cast<double>(n) * m.mean;
    row.expected_var = static_cast<double>(n) * m.variance;
    row.mean_rel_error = row.expected_mean != 0.0
                             ? std::abs(mean - row.expected_mean) / row.expected_mean
                             : std::numeric_limits<double>::quiet_NaN();
    row.var_rel_error = std::abs(var - row.expected_var) / row.expected_var;
    rows.push_back(row);
  }
  return rows;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<Type1Row>& rows) {
  out << "alpha,n,cum_reject_frac,stderr\n";
  for (const auto& r : rows) {
    out << format_real(r.alpha) << ',' << r.n << ',' << format_real(r.cum_reject_frac) << ','
        << format_real(r.stderr_) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<PowerRow>& rows) {
  out << "delta,N,seq_power,batch_power_emp,batch_power_pred,stderr\n";
  for (const auto& r : rows) {
    out << format_real(r.delta) << ',' << r.N << ',' << format_real(r.seq_power) << ','
        << format_real(r.batch_power_emp) << ',' << format_real(r.batch_power_pred) << ','
        << format_real(r.stderr_) << '\n';
  }
}

void write_csv(std::ostream& out, const StoppingResult& result) {
  out << "delta,q10,q25,q50,q75,q90,reject_frac\n";
  for (const auto& r : result.rows) {
    out << format_real(r.delta) << ',' << format_real(r.q10) << ',' << format_real(r.q25) << ','
        << format_real(r.q50) << ',' << format_real(r.q75) << ',' << format_real(r.q90) << ','
        << format_real(r.reject_frac) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<MomentRow>& rows) {
  out << "delta,n,mean_T,var_T,expected_mean,expected_var,mean_rel_error,var_rel_error\n";
  for (const auto& r : rows) {
    out << format_real(r.delta) << ',' << r.n << ',' << format_real(r.mean_T) << ','
        << format_real(r.var_T) << ',' << format_real(r.expected_mean) << ','
        << format_real(r.expected_var) << ',' << format_real(r.mean_rel_error) << ','
        << format_real(r.var_rel_error) << '\n';
  }
}

}  // namespace seqtest
