#include "seqtest/core.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "seqtest/errors.hpp"

namespace seqtest {

double Observation::norm() const {
  double ss = 0.0;
  for (double v : values_) ss += v * v;
  return std::sqrt(ss);
}

Observation rescale(std::span<const double> raw, double bound) {
  if (!(bound > 0.0)) {
    throw DomainError("rescale: bound must be positive");
  }
  const double norm = std::sqrt(
      std::inner_product(raw.begin(), raw.end(), raw.begin(), 0.0));
  if (norm > bound) {
    throw NormBoundViolated("rescale: observation norm " + std::to_string(norm) +
                            " exceeds declared bound " + std::to_string(bound));
  }
  std::vector<double> out(raw.size());
  const double scale = 2.0 * bound;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / scale;
  return Observation(std::move(out));
}

std::string_view to_string(IncrementFamily family) {
  switch (family) {
    case IncrementFamily::coin:
      return "coin";
    case IncrementFamily::mean:
      return "mean";
    case IncrementFamily::mmd:
      return "mmd";
    case IncrementFamily::dcov:
      return "dcov";
  }
  return "unknown";
}

IncrementFamily family_from_string(std::string_view name) {
  if (name == "coin") return IncrementFamily::coin;
  if (name == "mean") return IncrementFamily::mean;
  if (name == "mmd") return IncrementFamily::mmd;
  if (name == "dcov") return IncrementFamily::dcov;
  throw ConfigError("unknown increment family '" + std::string(name) + "'");
}

WalkState update_walk(WalkState state, Increment h) {
  state.add(h.value);
  return state;
}

std::string_view to_string(Decision decision) {
  return decision == Decision::reject ? "reject" : "fail_to_reject";
}

double ProblemSpec::signal_to_noise() const {
  const double d = static_cast<double>(sigma.rows());
  const double sigma_scalar = std::sqrt(sigma.trace() / d);
  return delta().norm() / sigma_scalar;
}

void ProblemSpec::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw DomainError("ProblemSpec: rho must lie in [0, 1]");
  }
  if (mu1.size() != mu2.size()) {
    throw DomainError("ProblemSpec: mean vectors differ in dimension");
  }
  if (sigma.rows() != sigma.cols() || sigma.rows() != mu1.size()) {
    throw DomainError("ProblemSpec: Sigma must be square and match the means");
  }
  if (sigma.size() == 0) return;
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("ProblemSpec: Sigma is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw DomainError("ProblemSpec: Sigma is not positive semidefinite");
  }
}

ProblemSpec ProblemSpec::isotropic_gaussian(std::size_t d, double shift, double sigma) {
  if (d == 0) throw DomainError("isotropic_gaussian: dimension must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("isotropic_gaussian: sigma must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  ProblemSpec spec;
  spec.mu1 = Eigen::VectorXd::Zero(n);
  spec.mu2 = Eigen::VectorXd::Zero(n);
  spec.mu2[0] = shift;
  spec.sigma = sigma * sigma * Eigen::MatrixXd::Identity(n, n);
  return spec;
}

ProblemSpec ProblemSpec::coin(double bias) {
  ProblemSpec spec;
  spec.rho = 0.5 + bias;
  spec.validate();
  return spec;
}

}  // namespace seqtest
