#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "seqtest/core.hpp"
#include "seqtest/errors.hpp"
#include "seqtest/thresholds.hpp"

namespace seqtest {

enum class Sidedness { one_sided_upper, two_sided };

std::string_view to_string(Sidedness sided);
Sidedness sidedness_from_string(std::string_view name);

// Coin tests reject on S_n > q_n; the two-sample and independence families
// bound |T_n|.
Sidedness default_sidedness(IncrementFamily family);

// Anything that yields increments one at a time and std::nullopt once the
// stream is exhausted.
template <typename F>
concept IncrementSource = requires(F f) {
  { f() } -> std::convertible_to<std::optional<Increment>>;
};

enum class StepOutcome { continue_testing, reject };

struct TrajectoryPoint {
  std::uint64_t n = 0;
  double statistic = 0.0;
  double boundary = 0.0;
};

// Sequential test loop: after every increment compare the walk statistic to
// q_n and stop on the first crossing.
class SequentialTest {
 public:
  SequentialTest(ThresholdPolicy policy, std::uint64_t n_max, Sidedness sided,
                 bool record_trajectory = false);

  // Throws TestAlreadyDecided after a rejection and CapReached once n_max
  // increments have been consumed.
  StepOutcome step(Increment h);

  bool rejected() const { return rejected_; }
  bool at_cap() const { return walk_.n() >= n_max_; }
  bool decided() const { return rejected_ || at_cap(); }

  // Frozen verdict after a rejection; otherwise fail_to_reject at the current
  // step count.
  TestVerdict verdict() const;

  const WalkState& walk() const { return walk_; }
  const ThresholdPolicy& policy() const { return policy_; }
  std::uint64_t n_max() const { return n_max_; }
  Sidedness sidedness() const { return sided_; }
  std::span<const TrajectoryPoint> trajectory() const { return trajectory_; }

 private:
  double statistic() const;

  ThresholdPolicy policy_;
  std::uint64_t n_max_;
  Sidedness sided_;
  bool record_trajectory_;
  WalkState walk_;
  bool rejected_ = false;
  double last_boundary_;
  std::vector<TrajectoryPoint> trajectory_;
};

template <IncrementSource Source>
TestVerdict run_sequential(Source&& source, const ThresholdPolicy& policy,
                           std::uint64_t n_max, Sidedness sided) {
  SequentialTest test(policy, n_max, sided);
  while (!test.at_cap()) {
    std::optional<Increment> h = source();
    if (!h) {
      TestVerdict verdict = test.verdict();
      verdict.exhausted = true;
      return verdict;
    }
    if (test.step(*h) == StepOutcome::reject) break;
  }
  return test.verdict();
}

// Fixed-sample test on exactly N increments. Throws InsufficientData if the
// stream ends early.
template <IncrementSource Source>
TestVerdict run_batch(Source&& source, std::uint64_t N, const ThresholdPolicy& policy,
                      Sidedness sided) {
  policy.validate();
  if (policy.is_sequential()) {
    throw PolicyModeMismatch("run_batch requires a batch threshold mode");
  }
  WalkState walk;
  while (walk.n() < N) {
    std::optional<Increment> h = source();
    if (!h) {
      throw InsufficientData("run_batch: stream ended after " + std::to_string(walk.n()) +
                             " of " + std::to_string(N) + " increments");
    }
    walk.add(h->value);
  }
  TestVerdict verdict;
  verdict.tau = N;
  verdict.boundary_at_stop = batch_threshold(walk, policy);
  verdict.statistic_at_stop =
      sided == Sidedness::two_sided ? std::abs(walk.sum()) : walk.sum();
  verdict.decision = verdict.statistic_at_stop > verdict.boundary_at_stop
                         ? Decision::reject
                         : Decision::fail_to_reject;
  return verdict;
}

// Adapts a span of increments into an IncrementSource.
class SpanSource {
 public:
  explicit SpanSource(std::span<const Increment> increments) : increments_(increments) {}
  std::optional<Increment> operator()() {
    if (next_ == increments_.size()) return std::nullopt;
    return increments_[next_++];
  }

 private:
  std::span<const Increment> increments_;
  std::size_t next_ = 0;
};

}  // namespace seqtest
