#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "seqtest/analysis.hpp"
#include "seqtest/engine.hpp"
#include "seqtest/errors.hpp"
#include "seqtest/experiments.hpp"
#include "seqtest/generators.hpp"
#include "seqtest/json_io.hpp"
#include "seqtest/stream_io.hpp"

namespace {

using nlohmann::json;
using namespace seqtest;

// Inline JSON, or a path to a JSON file.
json load_json(const std::string& text) {
  if (std::filesystem::exists(text)) {
    std::ifstream in(text);
    if (!in) throw ConfigError("cannot open " + text);
    try {
      return json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(text + ": " + e.what());
    }
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

struct StreamOptions {
  std::string family = "mean";
  std::string policy;
  bool from_stdin = false;
  std::string gen;
  std::uint64_t seed = 0;
  double bound = 0.0;
  std::string sided;
  std::string kernel = "linear";
  double gamma = 1.0;
};

void add_stream_options(CLI::App& cmd, StreamOptions& o) {
  cmd.add_option("--family", o.family, "coin, mean, mmd or dcov")
      ->check(CLI::IsMember({"coin", "mean", "mmd", "dcov"}));
  cmd.add_option("--policy", o.policy, "threshold policy as JSON or a JSON file")->required();
  auto* in = cmd.add_flag("--stdin", o.from_stdin, "read observations from standard input");
  cmd.add_option("--gen", o.gen,
                 "synthetic source as JSON: coin {rho}, mean/mmd {d, delta, sigma}, "
                 "dcov {d, corr}")
      ->excludes(in);
  cmd.add_option("--seed", o.seed, "generator seed");
  cmd.add_option("--bound", o.bound,
                 "norm bound for rescaling (distance bound for dcov); 0 disables");
  cmd.add_option("--sided", o.sided, "one_sided_upper or two_sided");
  cmd.add_option("--kernel", o.kernel, "MMD kernel")->check(CLI::IsMember({"linear", "gaussian"}));
  cmd.add_option("--gamma", o.gamma, "gaussian kernel bandwidth");
}

// Type-erased increment source for the selected input.
std::function<std::optional<Increment>()> make_source(const StreamOptions& o,
                                                      IncrementFamily family) {
  const KernelSpec kernel =
      o.kernel == "gaussian" ? KernelSpec::gaussian(o.gamma) : KernelSpec::linear();
  if (o.gen.empty()) {
    auto reader = std::make_shared<LineIncrementReader>(std::cin, family, o.bound, kernel);
    return [reader] { return (*reader)(); };
  }
  const json g = load_json(o.gen);
  const CounterRng rng(o.seed);
  switch (family) {
    case IncrementFamily::coin: {
      auto s = std::make_shared<CoinStream>(g.value("rho", 0.5), rng);
      return [s] { return (*s)(); };
    }
    case IncrementFamily::mean: {
      auto s = std::make_shared<GaussianPairStream>(g.value("d", std::size_t{10}),
                                                    g.value("delta", 0.0),
                                                    g.value("sigma", 1.0), rng);
      return [s] { return (*s)(); };
    }
    case IncrementFamily::mmd: {
      auto s = std::make_shared<GaussianMmdStream>(g.value("d", std::size_t{10}),
                                                   g.value("delta", 0.0),
                                                   g.value("sigma", 1.0), kernel, rng);
      return [s] { return (*s)(); };
    }
    case IncrementFamily::dcov: {
      auto s = std::make_shared<DependentPairStream>(g.value("d", std::size_t{1}),
                                                     g.value("corr", 0.0), rng, o.bound);
      return [s] { return (*s)(); };
    }
  }
  throw ConfigError("unknown family");
}

Sidedness resolve_sided(const StreamOptions& o, IncrementFamily family) {
  return o.sided.empty() ? default_sidedness(family) : sidedness_from_string(o.sided);
}

std::string summary_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".summary.json");
  return p.string();
}

json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + path);
  file << text;
}

int run_experiment(const std::string& config_path, std::string out, bool paper_scale,
                   std::optional<std::uint64_t> seed) {
  ExperimentConfig config = config_from_json(load_json(config_path));
  if (paper_scale) config.apply_paper_scale();
  if (seed) config.seed = *seed;
  if (out.empty()) out = config.output_path;
  if (out.empty()) throw ConfigError("no output path: pass --out or set output_path");
  config.output_path = out;

  std::ostringstream csv;
  json summary = {{"slope", nullptr}, {"slope_stderr", nullptr}};
  switch (config.experiment) {
    case ExperimentKind::type1_coin:
    case ExperimentKind::type1_gaussian:
      write_csv(csv, run_type1_experiment(config));
      break;
    case ExperimentKind::power_curve:
      write_csv(csv, run_power_experiment(config));
      break;
    case ExperimentKind::stopping_distribution: {
      const StoppingResult result = run_stopping_experiment(config);
      write_csv(csv, result);
      summary["slope"] = real_or_null(result.slope);
      summary["slope_stderr"] = real_or_null(result.slope_stderr);
      summary["fitted_deltas"] = result.fitted_deltas;
      break;
    }
    case ExperimentKind::moment_check:
      write_csv(csv, run_moment_check(config));
      break;
  }
  summary["config_echo"] = to_json(config);
  write_text(out, csv.str());
  write_text(summary_path(out), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential LIL hypothesis tests and their simulation harness"};
  app.require_subcommand(1);

  StreamOptions run_opts;
  std::uint64_t n_max = 10'000;
  auto* run = app.add_subcommand("run", "sequential test on a stream");
  add_stream_options(*run, run_opts);
  run->add_option("--nmax", n_max, "sample cap")->required()->check(CLI::PositiveNumber);

  StreamOptions batch_opts;
  std::uint64_t batch_n = 0;
  auto* batch = app.add_subcommand("batch", "fixed-sample test on the first N increments");
  add_stream_options(*batch, batch_opts);
  batch->add_option("--n", batch_n, "batch size")->required()->check(CLI::PositiveNumber);

  std::string config_path, out_path;
  bool paper_scale = false;
  std::optional<std::uint64_t> exp_seed;
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiment to CSV");
  experiment->add_option("--config", config_path, "experiment config JSON")->required();
  experiment->add_option("--out", out_path, "CSV output path");
  experiment->add_flag("--paper-scale", paper_scale, "full-size trial counts and horizons");
  experiment->add_option("--seed", exp_seed, "override the config seed");

  std::size_t an_d = 10;
  double an_delta = 1.0, an_sigma = 1.0, an_alpha = 0.05, an_beta = 0.1;
  std::optional<std::uint64_t> an_n;
  auto* power = app.add_subcommand("power", "predicted batch power and oracle sample size");
  power->add_option("--d", an_d, "dimension")->check(CLI::PositiveNumber);
  power->add_option("--delta", an_delta, "mean shift along the first axis");
  power->add_option("--sigma", an_sigma, "per-coordinate standard deviation");
  power->add_option("--alpha", an_alpha, "level");
  power->add_option("--beta", an_beta, "target type II error");
  power->add_option("--n", an_n, "batch size for the power report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *batch) {
      const StreamOptions& o = *run ? run_opts : batch_opts;
      if (!o.from_stdin && o.gen.empty()) throw ConfigError("pass --stdin or --gen");
      const IncrementFamily family = family_from_string(o.family);
      const ThresholdPolicy policy = policy_from_json(load_json(o.policy));
      auto source = make_source(o, family);
      // Batch boundaries are one-sided level-alpha rules unless asked otherwise.
      const Sidedness sided = *run || !o.sided.empty() ? resolve_sided(o, family)
                                                       : Sidedness::one_sided_upper;
      const TestVerdict verdict = *run ? run_sequential(source, policy, n_max, sided)
                                       : run_batch(source, batch_n, policy, sided);
      std::cout << to_json(verdict).dump() << "\n";
      return 0;
    }
    if (*experiment) return run_experiment(config_path, out_path, paper_scale, exp_seed);
    if (*power) {
      const ProblemSpec spec = ProblemSpec::isotropic_gaussian(an_d, an_delta, an_sigma);
      json report = {{"n_star", oracle_sample_size(spec, an_alpha, an_beta)}};
      report["report"] = to_json(power_report(an_n.value_or(report["n_star"].get<std::uint64_t>()),
                                              spec, an_alpha));
      std::cout << report.dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "seqtest: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
