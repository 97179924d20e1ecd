// Sequential best-arm identification policies.
//
// A policy is driven one round at a time. After round t completes the driver
// calls decide(t, rewards-for-round-t) and the policy answers with the set of
// arms to sample in round t + 1, or with Stop. Round 0 is the empty prefix, so
// the first call is decide(0, {}).
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "dvbai/bounds.hpp"
#include "dvbai/env.hpp"

namespace dvbai {

enum class PolicyKind { Wtcs, Pswse, Se, Lucb };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

inline constexpr std::int64_t kDefaultMaxRounds = 10'000'000;

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Pswse;
  std::optional<double> known_gap;  // WTCS only
  std::int64_t max_rounds = kDefaultMaxRounds;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ConfigError unless known_gap is set (and > 0) exactly for WTCS and
/// max_rounds is positive.
void validate(const PolicyConfig& cfg);

struct Observation {
  ArmIndex arm;
  double reward;
};

struct SampleSet {
  std::vector<ArmIndex> arms;  // ascending, possibly empty
  friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

struct Stop {
  ArmIndex arm;
  friend bool operator==(const Stop&, const Stop&) = default;
};

using Decision = std::variant<SampleSet, Stop>;

/// Running statistics for an arm sampled at rounds t_1 < ... < t_n.
/// The plain mean of those samples has variance (sigma^2 / n^2) sum 1/t_i.
struct ArmStats {
  std::int64_t n = 0;
  double sum = 0.0;
  double inv_time_sum = 0.0;

  void add(double reward, Round t);
  double mean() const;
  double variance_of_mean(double sigma) const;
};

/// Baseline radius sqrt(2 V_n ln(4 K n^2 / delta)); infinite while n = 0.
/// The per-(arm, n) failure probability is delta / (2 K n^2).
double baseline_radius(const ArmStats& stats, double sigma, std::size_t K, double delta);

/// Incremental form of the weighted mean sum_tau w_{tau,r} X_tau:
///   m(r) = ((r - 1)/(r + 1)) m(r - 1) + (2/(r + 1)) X_r.
class WeightedMean {
 public:
  void add(double x);
  double value() const { return value_; }
  std::int64_t count() const { return count_; }

 private:
  double value_ = 0.0;
  std::int64_t count_ = 0;
};

class Policy {
 public:
  Policy(std::size_t num_arms, double sigma, CostConfig cost);
  virtual ~Policy() = default;
  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  virtual PolicyKind kind() const = 0;

  /// Consumes the rewards of round t (exactly the arms requested for t, in
  /// the requested order) and returns the decision for round t + 1.
  /// Calling again after Stop is a logic error.
  Decision decide(Round t, std::span<const Observation> observed);

  bool terminal() const { return declared_.has_value(); }

  /// The declared arm; throws std::logic_error before Stop.
  ArmIndex declared_arm() const;

  std::size_t num_arms() const { return num_arms_; }
  double sigma() const { return sigma_; }
  const CostConfig& cost() const { return cost_; }

 protected:
  virtual Decision step(Round t, std::span<const Observation> observed) = 0;

  std::vector<ArmIndex> all_arms() const;

 private:
  std::size_t num_arms_;
  double sigma_;
  CostConfig cost_;
  std::vector<ArmIndex> pending_;
  Round last_round_ = -1;
  std::optional<ArmIndex> declared_;
};

/// Wait Then Continuously Sample. Idles through round t_start = ceil(t_W),
/// samples every arm in rounds t_start+1 .. t_end with
/// t_end = t_start + ceil(t_W / (K c)), then declares the arm with the best
/// window mean.
class WtcsPolicy final : public Policy {
 public:
  WtcsPolicy(std::size_t num_arms, double sigma, CostConfig cost, double known_gap);

  PolicyKind kind() const override { return PolicyKind::Wtcs; }
  double wait() const { return wait_; }
  Round t_start() const { return t_start_; }
  Round window_length() const { return window_; }
  Round t_end() const { return t_start_ + window_; }
  std::vector<double> window_means() const;

 protected:
  Decision step(Round t, std::span<const Observation> observed) override;

 private:
  double wait_ = 0.0;
  Round t_start_ = 0;
  Round window_ = 0;
  std::vector<double> sums_;
};

/// Periodic Sampling with Weighted Successive Elimination.
class PswsePolicy final : public Policy {
 public:
  struct Elimination {
    ArmIndex arm;
    Round t;
    double estimate;
    double threshold;
  };

  PswsePolicy(std::size_t num_arms, double sigma, CostConfig cost);

  PolicyKind kind() const override { return PolicyKind::Pswse; }
  std::int64_t period() const { return period_; }
  const std::vector<ArmIndex>& active() const { return active_; }
  std::int64_t sampling_rounds() const { return rounds_; }
  double estimate(ArmIndex arm) const { return estimates_.at(arm).value(); }
  const std::vector<Elimination>& eliminations() const { return eliminations_; }

 protected:
  Decision step(Round t, std::span<const Observation> observed) override;

 private:
  std::int64_t period_;
  std::vector<ArmIndex> active_;
  std::vector<WeightedMean> estimates_;
  std::int64_t rounds_ = 0;
  std::vector<Elimination> eliminations_;
};

/// Confidence bounds of one arm at the moment a baseline acted on them.
struct IntervalSnapshot {
  ArmIndex arm;
  double mean;
  double radius;
  double lcb() const { return mean - radius; }
  double ucb() const { return mean + radius; }
};

/// Successive Elimination with the variance-aware baseline radius.
class SePolicy final : public Policy {
 public:
  struct Elimination {
    Round t;
    IntervalSnapshot leader;
    IntervalSnapshot eliminated;
  };

  SePolicy(std::size_t num_arms, double sigma, CostConfig cost);

  PolicyKind kind() const override { return PolicyKind::Se; }
  const std::vector<ArmIndex>& active() const { return active_; }
  const ArmStats& stats(ArmIndex arm) const { return stats_.at(arm); }
  const std::vector<Elimination>& eliminations() const { return eliminations_; }

 protected:
  Decision step(Round t, std::span<const Observation> observed) override;

 private:
  IntervalSnapshot snapshot(ArmIndex arm) const;

  std::vector<ArmIndex> active_;
  std::vector<ArmStats> stats_;
  std::vector<Elimination> eliminations_;
};

/// LUCB: every arm once in round 1, then the empirical leader and the best
/// UCB among the rest each round, stopping once the leader's LCB clears
/// every other UCB.
class LucbPolicy final : public Policy {
 public:
  LucbPolicy(std::size_t num_arms, double sigma, CostConfig cost);

  PolicyKind kind() const override { return PolicyKind::Lucb; }
  const ArmStats& stats(ArmIndex arm) const { return stats_.at(arm); }
  double radius(ArmIndex arm) const;

  /// Intervals of all arms at the stopping round (leader first).
  const std::vector<IntervalSnapshot>& stopping_intervals() const { return at_stop_; }

 protected:
  Decision step(Round t, std::span<const Observation> observed) override;

 private:
  std::vector<ArmStats> stats_;
  std::vector<IntervalSnapshot> at_stop_;
};

/// Builds the policy for `cfg`. Throws ConfigError on an invalid config.
std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, std::size_t num_arms, double sigma,
                                    const CostConfig& cost);

}  // namespace dvbai
