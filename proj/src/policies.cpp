#include "dvbai/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dvbai {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Wtcs: return "wtcs";
    case PolicyKind::Pswse: return "pswse";
    case PolicyKind::Se: return "se";
    case PolicyKind::Lucb: return "lucb";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (auto kind : {PolicyKind::Wtcs, PolicyKind::Pswse, PolicyKind::Se, PolicyKind::Lucb})
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

void validate(const PolicyConfig& cfg) {
  if (cfg.kind == PolicyKind::Wtcs) {
    if (!cfg.known_gap) throw ConfigError("wtcs requires a known gap");
    if (!(std::isfinite(*cfg.known_gap) && *cfg.known_gap > 0.0))
      throw ConfigError("wtcs known gap must be > 0");
  } else if (cfg.known_gap) {
    throw ConfigError(std::string(to_string(cfg.kind)) + " does not take a known gap");
  }
  if (cfg.max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
}

void ArmStats::add(double reward, Round t) {
  ++n;
  sum += reward;
  inv_time_sum += 1.0 / static_cast<double>(t);
}

double ArmStats::mean() const {
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double ArmStats::variance_of_mean(double sigma) const {
  if (n == 0) return std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  return sigma * sigma * inv_time_sum / (nn * nn);
}

double baseline_radius(const ArmStats& stats, double sigma, std::size_t K, double delta) {
  if (stats.n == 0) return std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(stats.n);
  const double log_term = std::log(4.0 * static_cast<double>(K) * nn * nn / delta);
  return std::sqrt(2.0 * stats.variance_of_mean(sigma) * log_term);
}

void WeightedMean::add(double x) {
  ++count_;
  const double r = static_cast<double>(count_);
  value_ = ((r - 1.0) / (r + 1.0)) * value_ + (2.0 / (r + 1.0)) * x;
}

namespace {

// Lowest index wins ties.
template <typename Score>
ArmIndex argmax(const std::vector<ArmIndex>& arms, Score score) {
  ArmIndex best = arms.front();
  double best_score = score(best);
  for (ArmIndex a : arms) {
    const double s = score(a);
    if (s > best_score || (s == best_score && a < best)) {
      best = a;
      best_score = s;
    }
  }
  return best;
}

}  // namespace

Policy::Policy(std::size_t num_arms, double sigma, CostConfig cost)
    : num_arms_(num_arms), sigma_(sigma), cost_(cost) {
  if (num_arms == 0) throw ConfigError("policy needs at least one arm");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
}

std::vector<ArmIndex> Policy::all_arms() const {
  std::vector<ArmIndex> arms(num_arms_);
  std::iota(arms.begin(), arms.end(), ArmIndex{0});
  return arms;
}

Decision Policy::decide(Round t, std::span<const Observation> observed) {
  if (terminal()) throw std::logic_error("decide called after Stop");
  if (t != last_round_ + 1)
    throw std::logic_error("decide: rounds must be consecutive (expected " +
                           std::to_string(last_round_ + 1) + ", got " + std::to_string(t) + ")");
  if (observed.size() != pending_.size())
    throw std::logic_error("decide: observations do not match the requested arms");
  for (std::size_t i = 0; i < observed.size(); ++i)
    if (observed[i].arm != pending_[i])
      throw std::logic_error("decide: observations do not match the requested arms");
  last_round_ = t;

  Decision d = num_arms_ == 1 ? Decision{Stop{0}} : step(t, observed);
  if (auto* s = std::get_if<Stop>(&d)) {
    declared_ = s->arm;
    pending_.clear();
  } else {
    pending_ = std::get<SampleSet>(d).arms;
  }
  return d;
}

ArmIndex Policy::declared_arm() const {
  if (!declared_) throw std::logic_error("declared_arm: policy has not stopped");
  return *declared_;
}

// --- WTCS -------------------------------------------------------------------

WtcsPolicy::WtcsPolicy(std::size_t num_arms, double sigma, CostConfig cost, double known_gap)
    : Policy(num_arms, sigma, cost), sums_(num_arms, 0.0) {
  if (num_arms < 2) return;
  wait_ = wait_time(known_gap, sigma, num_arms, cost);
  t_start_ = static_cast<Round>(std::ceil(wait_));
  window_ = static_cast<Round>(std::ceil(wait_ / (static_cast<double>(num_arms) * cost.c())));
}

std::vector<double> WtcsPolicy::window_means() const {
  std::vector<double> means(sums_);
  if (window_ > 0)
    for (double& m : means) m /= static_cast<double>(window_);
  return means;
}

Decision WtcsPolicy::step(Round t, std::span<const Observation> observed) {
  for (const auto& o : observed) sums_[o.arm] += o.reward;
  if (t == t_end()) {
    const auto means = window_means();
    return Stop{argmax(all_arms(), [&](ArmIndex a) { return means[a]; })};
  }
  if (t + 1 > t_start_) return SampleSet{all_arms()};
  return SampleSet{};
}

// --- PS-WSE -----------------------------------------------------------------

PswsePolicy::PswsePolicy(std::size_t num_arms, double sigma, CostConfig cost)
    : Policy(num_arms, sigma, cost),
      period_(sampling_period(num_arms, cost)),
      active_(all_arms()),
      estimates_(num_arms) {}

Decision PswsePolicy::step(Round t, std::span<const Observation> observed) {
  if (!observed.empty()) {
    ++rounds_;
    for (const auto& o : observed) estimates_[o.arm].add(o.reward);

    const ArmIndex leader =
        argmax(active_, [&](ArmIndex a) { return estimates_[a].value(); });
    const double radius = confidence_radius(t, period_, sigma(), num_arms(), cost());
    const double threshold = estimates_[leader].value() - 2.0 * radius;

    std::vector<ArmIndex> survivors;
    survivors.reserve(active_.size());
    for (ArmIndex a : active_) {
      const double est = estimates_[a].value();
      if (est < threshold)
        eliminations_.push_back({a, t, est, threshold});
      else
        survivors.push_back(a);
    }
    active_ = std::move(survivors);
  }

  if (active_.size() == 1) return Stop{active_.front()};
  if ((t + 1) % period_ == 0) return SampleSet{active_};
  return SampleSet{};
}

// --- SE ---------------------------------------------------------------------

SePolicy::SePolicy(std::size_t num_arms, double sigma, CostConfig cost)
    : Policy(num_arms, sigma, cost), active_(all_arms()), stats_(num_arms) {}

IntervalSnapshot SePolicy::snapshot(ArmIndex arm) const {
  return {arm, stats_[arm].mean(),
          baseline_radius(stats_[arm], sigma(), num_arms(), cost().delta())};
}

Decision SePolicy::step(Round t, std::span<const Observation> observed) {
  for (const auto& o : observed) stats_[o.arm].add(o.reward, t);

  if (t > 0) {
    const ArmIndex leader = argmax(active_, [&](ArmIndex a) { return stats_[a].mean(); });
    const IntervalSnapshot lead = snapshot(leader);
    std::vector<ArmIndex> survivors;
    survivors.reserve(active_.size());
    for (ArmIndex a : active_) {
      const IntervalSnapshot other = snapshot(a);
      if (a != leader && lead.mean - other.mean > lead.radius + other.radius)
        eliminations_.push_back({t, lead, other});
      else
        survivors.push_back(a);
    }
    active_ = std::move(survivors);
  }

  if (active_.size() == 1) return Stop{active_.front()};
  return SampleSet{active_};
}

// --- LUCB -------------------------------------------------------------------

LucbPolicy::LucbPolicy(std::size_t num_arms, double sigma, CostConfig cost)
    : Policy(num_arms, sigma, cost), stats_(num_arms) {}

double LucbPolicy::radius(ArmIndex arm) const {
  return baseline_radius(stats_.at(arm), sigma(), num_arms(), cost().delta());
}

Decision LucbPolicy::step(Round t, std::span<const Observation> observed) {
  for (const auto& o : observed) stats_[o.arm].add(o.reward, t);
  if (t == 0) return SampleSet{all_arms()};

  const auto arms = all_arms();
  const ArmIndex leader = argmax(arms, [&](ArmIndex a) { return stats_[a].mean(); });
  const double leader_lcb = stats_[leader].mean() - radius(leader);

  bool separated = true;
  for (ArmIndex a : arms)
    if (a != leader && leader_lcb < stats_[a].mean() + radius(a)) separated = false;

  if (separated) {
    at_stop_.push_back({leader, stats_[leader].mean(), radius(leader)});
    for (ArmIndex a : arms)
      if (a != leader) at_stop_.push_back({a, stats_[a].mean(), radius(a)});
    return Stop{leader};
  }

  std::vector<ArmIndex> rest;
  for (ArmIndex a : arms)
    if (a != leader) rest.push_back(a);
  const ArmIndex challenger =
      argmax(rest, [&](ArmIndex a) { return stats_[a].mean() + radius(a); });
  return SampleSet{{std::min(leader, challenger), std::max(leader, challenger)}};
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& cfg, std::size_t num_arms, double sigma,
                                    const CostConfig& cost) {
  validate(cfg);
  switch (cfg.kind) {
    case PolicyKind::Wtcs:
      return std::make_unique<WtcsPolicy>(num_arms, sigma, cost, *cfg.known_gap);
    case PolicyKind::Pswse: return std::make_unique<PswsePolicy>(num_arms, sigma, cost);
    case PolicyKind::Se: return std::make_unique<SePolicy>(num_arms, sigma, cost);
    case PolicyKind::Lucb: return std::make_unique<LucbPolicy>(num_arms, sigma, cost);
  }
  throw ConfigError("unknown policy kind");
}

}  // namespace dvbai
