#include "dvbai/cli.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <random>

#include <CLI11.hpp>

#include "dvbai/bounds.hpp"
#include "dvbai/experiments.hpp"
#include "dvbai/harness.hpp"
#include "dvbai/results_io.hpp"

namespace dvbai::cli {

namespace {

// Input problems detected after parsing; mapped to kExitUsage.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Reporter {
 public:
  Reporter(std::ostream& out, std::ostream& err, Terminal term)
      : out_(out), err_(err), term_(term) {}

  void kv(std::string_view key, std::string_view value) { out_ << key << '=' << value << '\n'; }
  void kv(std::string_view key, double value) { kv(key, format_real(value)); }
  void kv_int(std::string_view key, long long value) { kv(key, std::to_string(value)); }

  std::ostream& out() { return out_; }

  void error(std::string_view msg) {
    if (term_.color)
      err_ << "\x1b[31merror:\x1b[0m " << msg << '\n';
    else
      err_ << "error: " << msg << '\n';
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  Terminal term_;
};

std::uint64_t resolve_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }
  std::uint64_t seed = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw UsageError("--seed must be an unsigned integer or 'random', got '" + text + "'");
  return seed;
}

ResultFormat resolve_format(const std::string& text) {
  const auto f = parse_result_format(text);
  if (!f) throw UsageError("--format must be csv or json, got '" + text + "'");
  return *f;
}

void print_stats(Reporter& rep, const AggregateStats& s) {
  rep.kv_int("n_trials", s.n_trials);
  rep.kv("mean_tau", s.tau.mean);
  rep.kv("se_tau", s.tau.se);
  rep.kv("mean_eta", s.eta.mean);
  rep.kv("se_eta", s.eta.se);
  rep.kv("mean_cost", s.cost.mean);
  rep.kv("se_cost", s.cost.se);
  rep.kv("error_rate", s.error_rate());
  rep.kv("se_defined", s.se_defined() ? "true" : "false");
}

struct RunFlags {
  std::string policy;
  std::vector<double> means;
  double sigma = 0.0;
  double c = 0.0;
  double delta = 0.0;
  double gap = 0.0;
  CLI::Option* gap_opt = nullptr;
  std::int64_t trials = kDefaultTrials;
  std::string seed = std::to_string(kDefaultSeed);
  std::string out;
  std::string format = "csv";
  unsigned jobs = 1;
  std::int64_t max_rounds = kDefaultMaxRounds;
};

int cmd_run(const RunFlags& f, Reporter& rep) {
  const auto kind = parse_policy_kind(f.policy);
  if (!kind) throw UsageError("--policy must be one of wtcs, pswse, se, lucb");
  if (f.trials < 1) throw UsageError("--trials must be >= 1");

  PolicyConfig cfg{*kind, std::nullopt, f.max_rounds};
  if (f.gap_opt->count() > 0) cfg.known_gap = f.gap;
  if (*kind == PolicyKind::Wtcs && !cfg.known_gap)
    throw UsageError("--gap is required for --policy wtcs");
  if (*kind != PolicyKind::Wtcs && cfg.known_gap)
    throw UsageError("--gap is only accepted with --policy wtcs");

  const Instance inst(f.means, f.sigma);
  const CostConfig cost(f.c, f.delta);
  validate(cfg);
  const auto seed = resolve_seed(f.seed);
  const auto format = resolve_format(f.format);
  // Formula domain problems (e.g. a WTCS wait time) surface here as input errors.
  if (*kind == PolicyKind::Wtcs && inst.num_arms() >= 2)
    (void)wait_time(*cfg.known_gap, inst.sigma(), inst.num_arms(), cost);

  const auto results = run_trials(inst, cfg, cost, f.trials, seed, f.jobs);
  const auto stats = aggregate(results);

  rep.kv("policy", to_string(*kind));
  rep.kv_int("K", static_cast<long long>(inst.num_arms()));
  rep.kv("sigma", inst.sigma());
  rep.kv("c", cost.c());
  rep.kv("delta", cost.delta());
  print_stats(rep, stats);
  rep.kv("master_seed", std::to_string(seed));
  if (results.size() == 1) {
    const auto& r = results.front();
    rep.kv_int("tau", r.tau);
    rep.kv_int("eta", r.eta);
    rep.kv("cost", r.cost);
    rep.kv_int("declared_arm", static_cast<long long>(r.declared) + 1);
    rep.kv("correct", r.correct ? "true" : "false");
  }

  if (!f.out.empty()) {
    ResultRow row{"run", "none", 0.0, *kind, inst.num_arms(), inst.sigma(), cost.c(),
                  cost.delta(), stats, seed};
    write_results({row}, f.out, format);
  }
  return kExitOk;
}

struct ExperimentFlags {
  std::string id;
  std::string spec_file;
  std::int64_t trials = kDefaultTrials;
  CLI::Option* trials_opt = nullptr;
  std::string seed = std::to_string(kDefaultSeed);
  CLI::Option* seed_opt = nullptr;
  std::string out;
  std::string format = "csv";
  unsigned jobs = 1;
};

int cmd_experiment(const ExperimentFlags& f, Reporter& rep, std::ostream& err) {
  const auto format = resolve_format(f.format);
  ExperimentSpec spec;
  if (!f.spec_file.empty()) {
    spec = load_experiment_spec(f.spec_file);
    if (f.trials_opt->count() > 0) spec.trials = f.trials;
    if (f.seed_opt->count() > 0) spec.master_seed = resolve_seed(f.seed);
  } else {
    const auto id = parse_experiment_id(f.id);
    if (!id || *id == ExperimentId::Custom)
      throw UsageError("unknown experiment id '" + f.id + "' (expected exp1..exp4)");
    if (f.trials < 1) throw UsageError("--trials must be >= 1");
    spec = builtin_experiment(*id, f.trials, resolve_seed(f.seed));
  }
  if (spec.trials < 1) throw UsageError("--trials must be >= 1");

  const auto table = run_experiment(spec, f.jobs);
  write_results(table.rows, f.out, format);

  for (const auto& r : table.rows) {
    rep.out() << "experiment=" << r.experiment << " param_name=" << r.param_name
              << " param_value=" << format_real(r.param_value) << " policy=" << to_string(r.policy)
              << " mean_tau=" << format_real(r.stats.tau.mean)
              << " mean_eta=" << format_real(r.stats.eta.mean)
              << " mean_cost=" << format_real(r.stats.cost.mean)
              << " error_rate=" << format_real(r.stats.error_rate()) << '\n';
  }
  if (!table.failures.empty()) {
    for (const auto& fail : table.failures)
      err << "failed point " << fail.point_index << " (" << spec.param_name << "="
          << format_real(fail.param_value) << ", policy=" << to_string(fail.policy)
          << "): " << fail.message << '\n';
    return kExitPartial;
  }
  return kExitOk;
}

struct BoundsFlags {
  std::int64_t K = 0;
  double sigma = 0.0;
  double c = 0.0;
  double delta = 0.0;
  std::vector<double> gaps;
};

int cmd_bounds(const BoundsFlags& f, Reporter& rep) {
  if (f.K < 2) throw UsageError("--K must be >= 2");
  const auto K = static_cast<std::size_t>(f.K);
  if (f.gaps.size() != K - 1)
    throw UsageError("--gaps needs K-1 = " + std::to_string(K - 1) + " values, got " +
                     std::to_string(f.gaps.size()));
  for (double g : f.gaps)
    if (!(g > 0.0)) throw UsageError("--gaps entries must all be > 0");
  if (!(f.sigma > 0.0)) throw UsageError("--sigma must be > 0");
  const CostConfig cost(f.c, f.delta);

  std::vector<double> means{0.0};
  for (double g : f.gaps) means.push_back(-g);
  const Instance inst(means, f.sigma);
  const double gap = *std::min_element(f.gaps.begin(), f.gaps.end());
  const auto lambda = sampling_period(K, cost);

  rep.kv("t_W", wait_time(gap, f.sigma, K, cost));
  rep.kv_int("lambda", lambda);
  for (std::size_t j = 0; j < f.gaps.size(); ++j)
    rep.kv("T_" + std::to_string(j + 2),
           elimination_time_bound(f.gaps[j], f.sigma, lambda, K, cost));
  const auto wtcs = wtcs_cost_bound(gap, f.sigma, K, cost);
  rep.kv("wtcs_bound_exact", wtcs.exact);
  rep.kv("wtcs_bound", wtcs.simplified);
  rep.kv("pswse_bound", pswse_cost_bound(inst, cost));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            Terminal terminal) {
  Reporter rep(out, err, terminal);

  CLI::App app{"Best-arm identification with decreasing-variance rewards", "dvbai"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Monte Carlo runs of one policy on one instance");
  run_cmd->add_option("--policy", run.policy, "wtcs | pswse | se | lucb")->required();
  run_cmd->add_option("--means", run.means, "Arm means, comma separated")
      ->required()
      ->delimiter(',');
  run_cmd->add_option("--sigma", run.sigma, "Base noise scale")->required();
  run_cmd->add_option("--c", run.c, "Cost per arm sample")->required();
  run_cmd->add_option("--delta", run.delta, "Error budget")->required();
  run.gap_opt = run_cmd->add_option("--gap", run.gap, "Known gap (wtcs only)");
  run_cmd->add_option("--trials", run.trials, "Number of trials")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Master seed, or 'random'")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Write the summary row to this file");
  run_cmd->add_option("--format", run.format, "csv | json")->capture_default_str();
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")->capture_default_str();
  run_cmd->add_option("--max-rounds", run.max_rounds, "Per-trial round cap")
      ->capture_default_str();

  ExperimentFlags exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a parameter sweep");
  auto* id_opt = exp_cmd->add_option("--id", exp.id, "exp1 | exp2 | exp3 | exp4");
  auto* spec_opt = exp_cmd->add_option("--spec", exp.spec_file, "JSON sweep definition");
  id_opt->excludes(spec_opt);
  exp_cmd->require_option(1, 0);
  exp.trials_opt =
      exp_cmd->add_option("--trials", exp.trials, "Trials per point")->capture_default_str();
  exp.seed_opt = exp_cmd->add_option("--seed", exp.seed, "Master seed, or 'random'")
                     ->capture_default_str();
  exp_cmd->add_option("--out", exp.out, "Results file")->required();
  exp_cmd->add_option("--format", exp.format, "csv | json")->capture_default_str();
  exp_cmd->add_option("--jobs", exp.jobs, "Worker threads")->capture_default_str();

  BoundsFlags bnd;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the closed-form bounds");
  bounds_cmd->add_option("--K", bnd.K, "Number of arms")->required();
  bounds_cmd->add_option("--sigma", bnd.sigma, "Base noise scale")->required();
  bounds_cmd->add_option("--c", bnd.c, "Cost per arm sample")->required();
  bounds_cmd->add_option("--delta", bnd.delta, "Error budget")->required();
  bounds_cmd->add_option("--gaps", bnd.gaps, "Suboptimal gaps, comma separated")
      ->required()
      ->delimiter(',');

  std::vector<const char*> argv{"dvbai"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    rep.error(e.what());
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run, rep);
    if (*exp_cmd) return cmd_experiment(exp, rep, err);
    return cmd_bounds(bnd, rep);
  } catch (const FormulaDomainError& e) {
    rep.error(std::string("domain error in ") + e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    rep.error(e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    rep.error(e.what());
    return kExitRuntime;
  }
}

}  // namespace dvbai::cli
