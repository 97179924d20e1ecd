// Trial driver and Monte Carlo aggregation.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvbai/bounds.hpp"
#include "dvbai/env.hpp"
#include "dvbai/policies.hpp"

namespace dvbai {

/// Arms sampled in round t and the rewards seen. Rounds with no samples are
/// not recorded.
struct RoundRecord {
  Round t = 0;
  std::vector<ArmIndex> arms;
  std::vector<double> rewards;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct RoundLog {
  std::vector<RoundRecord> rounds;

  friend bool operator==(const RoundLog&, const RoundLog&) = default;
};

struct RunResult {
  Round tau = 0;
  std::int64_t eta = 0;
  double cost = 0.0;  // tau + c * eta
  ArmIndex declared = 0;
  bool correct = false;
  RngStream stream;
  std::optional<RoundLog> log;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

struct RunOptions {
  bool record_log = false;
};

/// The policy did not stop within max_rounds. Carries the log recorded so
/// far (empty unless logging was requested).
class NonTerminationError : public std::runtime_error {
 public:
  NonTerminationError(Round max_rounds, RoundLog partial)
      : std::runtime_error("policy did not stop within " + std::to_string(max_rounds) +
                           " rounds"),
        partial_log(std::move(partial)) {}
  RoundLog partial_log;
};

/// Runs one trial against the reward stream; deterministic in `stream`.
RunResult run_trial(const Instance& inst, const PolicyConfig& policy, const CostConfig& cost,
                    const RngStream& stream, RunOptions options = {});

/// Re-drives a fresh policy from a recorded log instead of the generator.
/// Throws std::runtime_error if the policy asks for anything the log lacks.
/// The returned result carries a copy of the log.
RunResult replay_trial(const Instance& inst, const PolicyConfig& policy, const CostConfig& cost,
                       const RoundLog& log);

struct SummaryStat {
  double mean = 0.0;
  double se = 0.0;  // sample sd (N - 1 denominator) / sqrt(N); 0 when N = 1

  friend bool operator==(const SummaryStat&, const SummaryStat&) = default;
};

struct AggregateStats {
  std::int64_t n_trials = 0;
  std::int64_t errors = 0;
  SummaryStat tau;
  SummaryStat eta;
  SummaryStat cost;

  double error_rate() const {
    return n_trials == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(n_trials);
  }
  /// False when N = 1 and the standard errors are placeholders.
  bool se_defined() const { return n_trials > 1; }

  friend bool operator==(const AggregateStats&, const AggregateStats&) = default;
};

/// Summarizes trials in index order.
AggregateStats aggregate(std::span<const RunResult> results);

/// A trial threw; identifies which one.
class TrialFailure : public std::runtime_error {
 public:
  TrialFailure(std::uint64_t trial, const std::string& what)
      : std::runtime_error("trial " + std::to_string(trial) + " failed: " + what), trial(trial) {}
  std::uint64_t trial;
};

/// Runs trials 0..N-1 with streams {master_seed, i} on up to `parallelism`
/// threads. The result does not depend on the thread count.
std::vector<RunResult> run_trials(const Instance& inst, const PolicyConfig& policy,
                                  const CostConfig& cost, std::int64_t n_trials,
                                  std::uint64_t master_seed, unsigned parallelism = 1,
                                  RunOptions options = {});

AggregateStats run_monte_carlo(const Instance& inst, const PolicyConfig& policy,
                               const CostConfig& cost, std::int64_t n_trials,
                               std::uint64_t master_seed, unsigned parallelism = 1);

}  // namespace dvbai
