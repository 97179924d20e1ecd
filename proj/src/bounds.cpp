#include "dvbai/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dvbai {

CostConfig::CostConfig(double c, double delta) : c_(c), delta_(delta) {
  if (!(std::isfinite(c) && c > 0.0)) throw std::invalid_argument("CostConfig: c must be > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("CostConfig: delta must lie in (0, 1)");
}

namespace {

void require_positive(const char* formula, const char* name, double value) {
  if (!(std::isfinite(value) && value > 0.0))
    throw FormulaDomainError(formula, std::string(name) + " must be finite and > 0");
}

// ln(arg), insisting the result is strictly positive.
double positive_log(const char* formula, double arg) {
  if (!(arg > 1.0))
    throw FormulaDomainError(formula, "logarithm argument " + std::to_string(arg) + " is <= 1");
  return std::log(arg);
}

}  // namespace

double wait_time(double gap, double sigma, std::size_t K, const CostConfig& cost) {
  require_positive("wait_time", "gap", gap);
  require_positive("wait_time", "sigma", sigma);
  if (K < 2) throw FormulaDomainError("wait_time", "K must be >= 2");
  const double k = static_cast<double>(K);
  const double log_term = positive_log("wait_time", k / cost.delta());
  return (2.0 * sigma / gap) * std::sqrt(k * cost.c() * log_term);
}

std::int64_t sampling_period(std::size_t K, const CostConfig& cost) {
  const double raw = cost.c() * static_cast<double>(K);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(raw + 0.5)));
}

double weight(std::int64_t tau, std::int64_t r) {
  if (tau < 1 || tau > r) throw std::invalid_argument("weight: requires 1 <= tau <= r");
  const double rr = static_cast<double>(r);
  return 2.0 * static_cast<double>(tau) / (rr * (rr + 1.0));
}

double confidence_radius(std::int64_t t, std::int64_t lambda, double sigma, std::size_t K,
                         const CostConfig& cost) {
  if (lambda < 1) throw FormulaDomainError("confidence_radius", "lambda must be >= 1");
  if (t < lambda || t % lambda != 0)
    throw FormulaDomainError("confidence_radius", "t must be a positive multiple of lambda");
  if (!(sigma >= 0.0)) throw FormulaDomainError("confidence_radius", "sigma must be >= 0");
  const double tt = static_cast<double>(t);
  const double lam = static_cast<double>(lambda);
  const double arg = 2.0 * static_cast<double>(K) * tt * tt / (lam * lam * cost.delta());
  return (sigma / tt) * std::sqrt(lam * positive_log("confidence_radius", arg));
}

double elimination_time_bound(double gap, double sigma, std::int64_t lambda, std::size_t K,
                              const CostConfig& cost) {
  require_positive("elimination_time_bound", "gap", gap);
  require_positive("elimination_time_bound", "sigma", sigma);
  if (lambda < 1) throw FormulaDomainError("elimination_time_bound", "lambda must be >= 1");
  const double lam = static_cast<double>(lambda);
  const double arg =
      36.0 * static_cast<double>(K) * sigma * sigma / (lam * cost.delta() * gap * gap);
  return (6.0 * sigma / gap) * std::sqrt(lam * positive_log("elimination_time_bound", arg));
}

WtcsCostBound wtcs_cost_bound(double gap, double sigma, std::size_t K, const CostConfig& cost) {
  require_positive("wtcs_cost_bound", "gap", gap);
  require_positive("wtcs_cost_bound", "sigma", sigma);
  if (K < 2) throw FormulaDomainError("wtcs_cost_bound", "K must be >= 2");
  const double kc = static_cast<double>(K) * cost.c();
  const double root =
      std::sqrt(kc * positive_log("wtcs_cost_bound", static_cast<double>(K) / cost.delta()));
  return {(2.0 * sigma / gap) * (2.0 + 1.0 / kc) * root, (6.0 * sigma / gap) * root};
}

double pswse_cost_bound(const Instance& inst, const CostConfig& cost) {
  const std::size_t K = inst.num_arms();
  if (K < 2) throw FormulaDomainError("pswse_cost_bound", "K must be >= 2");
  const double sigma = inst.sigma();
  require_positive("pswse_cost_bound", "sigma", sigma);

  std::vector<double> suboptimal;
  const auto all = gaps(inst);
  for (std::size_t k = 0; k < K; ++k)
    if (k != inst.best_arm()) suboptimal.push_back(all[k]);
  std::sort(suboptimal.begin(), suboptimal.end());

  const double c = cost.c();
  const double ck = c * static_cast<double>(K);
  auto root = [&](double gap) {
    const double arg = 36.0 * sigma * sigma / (c * cost.delta() * gap * gap);
    return std::sqrt(positive_log("pswse_cost_bound", arg) / ck);
  };

  const double d2 = suboptimal.front();
  double bound = 6.0 * sigma * (ck + 2.0 * c) / d2 * root(d2);
  for (std::size_t j = 1; j < suboptimal.size(); ++j)
    bound += 6.0 * c * sigma / suboptimal[j] * root(suboptimal[j]);
  return bound;
}

}  // namespace dvbai
