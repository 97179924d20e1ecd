#include "dvbai/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace dvbai {

namespace {

using RewardSource = std::function<double(ArmIndex, Round)>;

RunResult drive(const Instance& inst, const PolicyConfig& policy_cfg, const CostConfig& cost,
                const RewardSource& reward, bool record_log) {
  auto policy = make_policy(policy_cfg, inst.num_arms(), inst.sigma(), cost);

  RunResult result;
  RoundLog log;
  std::vector<Observation> observed;
  Round t = 0;
  for (;;) {
    const Decision d = policy->decide(t, observed);
    if (const auto* stop = std::get_if<Stop>(&d)) {
      result.tau = t;
      result.declared = stop->arm;
      break;
    }
    const auto& arms = std::get<SampleSet>(d).arms;
    ++t;
    if (t > policy_cfg.max_rounds) throw NonTerminationError(policy_cfg.max_rounds, std::move(log));

    observed.clear();
    for (ArmIndex a : arms) observed.push_back({a, reward(a, t)});
    result.eta += static_cast<std::int64_t>(arms.size());

    if (record_log && !arms.empty()) {
      RoundRecord rec{t, arms, {}};
      for (const auto& o : observed) rec.rewards.push_back(o.reward);
      log.rounds.push_back(std::move(rec));
    }
  }

  result.cost = static_cast<double>(result.tau) + cost.c() * static_cast<double>(result.eta);
  result.correct = result.declared == inst.best_arm();
  if (record_log) result.log = std::move(log);
  return result;
}

}  // namespace

RunResult run_trial(const Instance& inst, const PolicyConfig& policy, const CostConfig& cost,
                    const RngStream& stream, RunOptions options) {
  RunResult r = drive(
      inst, policy, cost,
      [&](ArmIndex arm, Round t) { return sample_reward(inst, arm, t, stream); },
      options.record_log);
  r.stream = stream;
  return r;
}

RunResult replay_trial(const Instance& inst, const PolicyConfig& policy, const CostConfig& cost,
                       const RoundLog& log) {
  // Rewards are served from the log; a request the log cannot answer means
  // the replayed policy diverged from the recorded one.
  auto lookup = [&](ArmIndex arm, Round t) {
    const auto it = std::lower_bound(log.rounds.begin(), log.rounds.end(), t,
                                     [](const RoundRecord& r, Round v) { return r.t < v; });
    if (it == log.rounds.end() || it->t != t)
      throw std::runtime_error("replay: no recorded samples for round " + std::to_string(t));
    for (std::size_t i = 0; i < it->arms.size(); ++i)
      if (it->arms[i] == arm) return it->rewards[i];
    throw std::runtime_error("replay: arm " + std::to_string(arm) + " not recorded in round " +
                             std::to_string(t));
  };
  RunResult r = drive(inst, policy, cost, lookup, true);
  if (r.log != log) throw std::runtime_error("replay: sampled sets diverge from the log");
  return r;
}

AggregateStats aggregate(std::span<const RunResult> results) {
  AggregateStats s;
  s.n_trials = static_cast<std::int64_t>(results.size());
  if (results.empty()) return s;

  const double n = static_cast<double>(results.size());
  auto summarize = [&](auto field) {
    double sum = 0.0;
    for (const auto& r : results) sum += field(r);
    const double mean = sum / n;
    if (results.size() < 2) return SummaryStat{mean, 0.0};
    double ss = 0.0;
    for (const auto& r : results) {
      const double d = field(r) - mean;
      ss += d * d;
    }
    return SummaryStat{mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
  };
  s.tau = summarize([](const RunResult& r) { return static_cast<double>(r.tau); });
  s.eta = summarize([](const RunResult& r) { return static_cast<double>(r.eta); });
  s.cost = summarize([](const RunResult& r) { return r.cost; });
  for (const auto& r : results)
    if (!r.correct) ++s.errors;
  return s;
}

std::vector<RunResult> run_trials(const Instance& inst, const PolicyConfig& policy,
                                  const CostConfig& cost, std::int64_t n_trials,
                                  std::uint64_t master_seed, unsigned parallelism,
                                  RunOptions options) {
  if (n_trials < 1) throw std::invalid_argument("run_trials: need at least one trial");
  validate(policy);

  const auto n = static_cast<std::size_t>(n_trials);
  std::vector<RunResult> results(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || abort.load()) return;
      try {
        results[i] = run_trial(inst, policy, cost, RngStream{master_seed, i}, options);
      } catch (...) {
        failures[i] = std::current_exception();
        abort.store(true);
      }
    }
  };

  const unsigned threads = std::clamp<unsigned>(parallelism, 1u, static_cast<unsigned>(n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw TrialFailure(i, e.what());
    }
  }
  return results;
}

AggregateStats run_monte_carlo(const Instance& inst, const PolicyConfig& policy,
                               const CostConfig& cost, std::int64_t n_trials,
                               std::uint64_t master_seed, unsigned parallelism) {
  const auto results = run_trials(inst, policy, cost, n_trials, master_seed, parallelism);
  return aggregate(results);
}

}  // namespace dvbai
