#include "seqtest/engine.hpp"

#include <cmath>
#include <string>

namespace seqtest {

std::string_view to_string(Sidedness sided) {
  return sided == Sidedness::two_sided ? "two_sided" : "one_sided_upper";
}

Sidedness sidedness_from_string(std::string_view name) {
  if (name == "two_sided" || name == "two") return Sidedness::two_sided;
  if (name == "one_sided_upper" || name == "one") return Sidedness::one_sided_upper;
  throw ConfigError("unknown sidedness '" + std::string(name) + "'");
}

Sidedness default_sidedness(IncrementFamily family) {
  return family == IncrementFamily::coin ? Sidedness::one_sided_upper : Sidedness::two_sided;
}

SequentialTest::SequentialTest(ThresholdPolicy policy, std::uint64_t n_max, Sidedness sided,
                               bool record_trajectory)
    : policy_(std::move(policy)),
      n_max_(n_max),
      sided_(sided),
      record_trajectory_(record_trajectory) {
  policy_.validate();
  if (!policy_.is_sequential()) {
    throw PolicyModeMismatch("SequentialTest requires a sequential threshold mode, got " +
                             std::string(to_string(policy_.mode)));
  }
  last_boundary_ = sequential_threshold(walk_, policy_);
}

double SequentialTest::statistic() const {
  return sided_ == Sidedness::two_sided ? std::abs(walk_.sum()) : walk_.sum();
}

StepOutcome SequentialTest::step(Increment h) {
  if (rejected_) throw TestAlreadyDecided("SequentialTest: null already rejected");
  if (at_cap()) {
    throw CapReached("SequentialTest: sample cap " + std::to_string(n_max_) + " reached");
  }
  walk_.add(h.value);
  last_boundary_ = sequential_threshold(walk_, policy_);
  const double stat = statistic();
  if (record_trajectory_) trajectory_.push_back({walk_.n(), walk_.sum(), last_boundary_});
  if (stat > last_boundary_) {
    rejected_ = true;
    return StepOutcome::reject;
  }
  return StepOutcome::continue_testing;
}

TestVerdict SequentialTest::verdict() const {
  TestVerdict v;
  v.decision = rejected_ ? Decision::reject : Decision::fail_to_reject;
  v.tau = walk_.n();
  v.boundary_at_stop = last_boundary_;
  v.statistic_at_stop = statistic();
  return v;
}

}  // namespace seqtest
