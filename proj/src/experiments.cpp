#include "dvbai/experiments.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dvbai {

std::string_view to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::Exp1: return "exp1";
    case ExperimentId::Exp2: return "exp2";
    case ExperimentId::Exp3: return "exp3";
    case ExperimentId::Exp4: return "exp4";
    case ExperimentId::Custom: return "custom";
  }
  return "unknown";
}

std::optional<ExperimentId> parse_experiment_id(std::string_view name) {
  for (auto id : {ExperimentId::Exp1, ExperimentId::Exp2, ExperimentId::Exp3, ExperimentId::Exp4,
                  ExperimentId::Custom})
    if (to_string(id) == name) return id;
  return std::nullopt;
}

void validate(const ExperimentSpec& spec) {
  if (spec.points.empty()) throw std::invalid_argument("experiment has no parameter points");
  if (spec.policies.empty()) throw std::invalid_argument("experiment has no policies");
  if (spec.trials < 1) throw std::invalid_argument("experiment needs at least one trial");
  if (spec.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
}

std::vector<double> arithmetic_means(std::size_t K, double d) {
  std::vector<double> means(K);
  for (std::size_t k = 0; k < K; ++k) means[k] = static_cast<double>(K - 1 - k) * d;
  return means;
}

std::vector<double> spaced_means(std::size_t K) {
  if (K < 2) throw std::invalid_argument("spaced_means: need at least two arms");
  std::vector<double> means(K);
  const double step = 3.0 / static_cast<double>(K - 1);
  for (std::size_t k = 0; k < K; ++k) means[k] = 3.0 - step * static_cast<double>(k);
  means.back() = 0.0;
  return means;
}

namespace {

constexpr std::size_t kArms = 5;
constexpr double kSigma = 10.0;
constexpr double kGap = 0.5;

const std::vector<PolicyKind> kAllPolicies = {PolicyKind::Wtcs, PolicyKind::Pswse,
                                              PolicyKind::Se, PolicyKind::Lucb};

}  // namespace

ExperimentSpec builtin_experiment(ExperimentId id, std::int64_t trials,
                                  std::uint64_t master_seed) {
  ExperimentSpec spec;
  spec.id = id;
  spec.policies = kAllPolicies;
  spec.trials = trials;
  spec.master_seed = master_seed;
  const CostConfig unit_cost(1.0, kDefaultDelta);

  switch (id) {
    case ExperimentId::Exp1:
      spec.param_name = "gap";
      for (int tenths = 3; tenths <= 10; ++tenths) {
        const double d = tenths / 10.0;
        spec.points.push_back({d, Instance(arithmetic_means(kArms, d), kSigma), unit_cost, {}});
      }
      break;
    case ExperimentId::Exp2:
      spec.param_name = "K";
      for (std::size_t K = 2; K <= 12; K += 2)
        spec.points.push_back(
            {static_cast<double>(K), Instance(spaced_means(K), kSigma), unit_cost, {}});
      break;
    case ExperimentId::Exp3:
      spec.param_name = "sigma";
      for (int s = 1; s <= 11; s += 2)
        spec.points.push_back({static_cast<double>(s),
                               Instance(arithmetic_means(kArms, kGap), static_cast<double>(s)),
                               unit_cost, {}});
      break;
    case ExperimentId::Exp4:
      spec.param_name = "c";
      for (double c : {0.01, 0.0316, 0.1, 0.316, 1.0, 3.16, 10.0, 31.6, 100.0})
        spec.points.push_back({c, Instance(arithmetic_means(kArms, kGap), kSigma),
                               CostConfig(c, kDefaultDelta), {}});
      break;
    case ExperimentId::Custom:
      throw std::invalid_argument("custom experiments are read from a spec file");
  }
  return spec;
}

std::vector<ExperimentSpec> builtin_experiments(std::int64_t trials, std::uint64_t master_seed) {
  std::vector<ExperimentSpec> out;
  for (auto id : {ExperimentId::Exp1, ExperimentId::Exp2, ExperimentId::Exp3, ExperimentId::Exp4})
    out.push_back(builtin_experiment(id, trials, master_seed));
  return out;
}

ExperimentSpec parse_experiment_spec(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("experiment spec: ") + e.what());
  }

  try {
    ExperimentSpec spec;
    spec.id = ExperimentId::Custom;
    spec.param_name = doc.value("param_name", std::string("param"));
    spec.trials = doc.value("trials", kDefaultTrials);
    spec.master_seed = doc.value("master_seed", kDefaultSeed);
    spec.max_rounds = doc.value("max_rounds", kDefaultMaxRounds);

    for (const auto& name : doc.at("policies")) {
      const auto kind = parse_policy_kind(name.get<std::string>());
      if (!kind) throw std::invalid_argument("unknown policy '" + name.get<std::string>() + "'");
      spec.policies.push_back(*kind);
    }
    for (const auto& p : doc.at("points")) {
      ParameterPoint point{p.at("param_value").get<double>(),
                           Instance(p.at("means").get<std::vector<double>>(),
                                    p.at("sigma").get<double>()),
                           CostConfig(p.at("c").get<double>(), p.value("delta", kDefaultDelta)),
                           {}};
      if (p.contains("gap")) point.known_gap = p.at("gap").get<double>();
      spec.points.push_back(std::move(point));
    }
    validate(spec);
    return spec;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("experiment spec: ") + e.what());
  }
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment spec " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_spec(text.str());
}

std::uint64_t point_seed(std::uint64_t master_seed, std::size_t point_index) {
  return derive_seed(master_seed, point_index);
}

ResultsTable run_experiment(const ExperimentSpec& spec, unsigned parallelism) {
  validate(spec);
  ResultsTable table;
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    const auto& point = spec.points[i];
    const auto seed = point_seed(spec.master_seed, i);
    for (PolicyKind kind : spec.policies) {
      try {
        PolicyConfig cfg{kind, std::nullopt, spec.max_rounds};
        if (kind == PolicyKind::Wtcs && point.instance.num_arms() >= 2)
          cfg.known_gap = point.known_gap.value_or(min_gap(point.instance));
        else if (kind == PolicyKind::Wtcs)
          cfg.known_gap = point.known_gap.value_or(1.0);  // unused: K = 1 stops at once

        ResultRow row;
        row.experiment = std::string(to_string(spec.id));
        row.param_name = spec.param_name;
        row.param_value = point.value;
        row.policy = kind;
        row.K = point.instance.num_arms();
        row.sigma = point.instance.sigma();
        row.c = point.cost.c();
        row.delta = point.cost.delta();
        row.stats =
            run_monte_carlo(point.instance, cfg, point.cost, spec.trials, seed, parallelism);
        row.master_seed = spec.master_seed;
        table.rows.push_back(std::move(row));
      } catch (const std::exception& e) {
        table.failures.push_back({i, point.value, kind, e.what()});
      }
    }
  }
  return table;
}

}  // namespace dvbai
