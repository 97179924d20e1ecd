// Parameter sweeps: the four built-in experiments plus user-defined ones.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dvbai/bounds.hpp"
#include "dvbai/env.hpp"
#include "dvbai/harness.hpp"
#include "dvbai/policies.hpp"

namespace dvbai {

enum class ExperimentId { Exp1, Exp2, Exp3, Exp4, Custom };

std::string_view to_string(ExperimentId id);
std::optional<ExperimentId> parse_experiment_id(std::string_view name);

inline constexpr std::int64_t kDefaultTrials = 1000;
inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr double kDefaultDelta = 0.1;

struct ParameterPoint {
  double value;
  Instance instance;
  CostConfig cost;
  /// Gap handed to WTCS. Defaults to the instance's true smallest gap.
  std::optional<double> known_gap;
};

struct ExperimentSpec {
  ExperimentId id = ExperimentId::Custom;
  std::string param_name;
  std::vector<ParameterPoint> points;
  std::vector<PolicyKind> policies;
  std::int64_t trials = kDefaultTrials;
  std::uint64_t master_seed = kDefaultSeed;
  std::int64_t max_rounds = kDefaultMaxRounds;
};

/// Throws std::invalid_argument on an empty grid, empty policy list or N < 1.
void validate(const ExperimentSpec& spec);

/// Means {(K-1)d, ..., 2d, d, 0}: arm 0 best, consecutive gap d.
std::vector<double> arithmetic_means(std::size_t K, double d);

/// K means equally spaced on [0, 3] with both endpoints, descending.
std::vector<double> spaced_means(std::size_t K);

ExperimentSpec builtin_experiment(ExperimentId id, std::int64_t trials = kDefaultTrials,
                                  std::uint64_t master_seed = kDefaultSeed);
std::vector<ExperimentSpec> builtin_experiments(std::int64_t trials = kDefaultTrials,
                                                std::uint64_t master_seed = kDefaultSeed);

/// Reads a custom sweep from JSON. Keys:
///   param_name, trials, master_seed, max_rounds (optional),
///   policies: ["wtcs", "pswse", ...],
///   points: [{param_value, means, sigma, c, delta, gap (optional)}]
ExperimentSpec parse_experiment_spec(std::string_view json_text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct ResultRow {
  std::string experiment;
  std::string param_name;
  double param_value = 0.0;
  PolicyKind policy = PolicyKind::Pswse;
  std::size_t K = 0;
  double sigma = 0.0;
  double c = 0.0;
  double delta = 0.0;
  AggregateStats stats;
  std::uint64_t master_seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct PointFailure {
  std::size_t point_index;
  double param_value;
  PolicyKind policy;
  std::string message;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  std::vector<PointFailure> failures;
};

/// Seed of the trial streams at point `point_index`. All policies at a point
/// share it, so their comparisons use common random numbers.
std::uint64_t point_seed(std::uint64_t master_seed, std::size_t point_index);

/// Runs every (point, policy) pair. A failing pair is recorded in
/// `failures` and the sweep continues.
ResultsTable run_experiment(const ExperimentSpec& spec, unsigned parallelism = 1);

}  // namespace dvbai
