// Closed-form quantities for the decreasing-variance cost model.
//
// Every logarithm here is natural. Functions return exact reals; rounding to
// whole rounds is done by the policies that consume them.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dvbai/env.hpp"

namespace dvbai {

/// Raised when a formula is evaluated outside its domain (for example a
/// logarithm whose argument is <= 1). The message names the formula.
class FormulaDomainError : public std::domain_error {
 public:
  FormulaDomainError(std::string formula, const std::string& detail)
      : std::domain_error(formula + ": " + detail), formula_(std::move(formula)) {}
  const std::string& formula() const { return formula_; }

 private:
  std::string formula_;
};

/// Per-sample cost c > 0 and error budget delta in (0, 1).
class CostConfig {
 public:
  CostConfig(double c, double delta);

  double c() const { return c_; }
  double delta() const { return delta_; }

  friend bool operator==(const CostConfig&, const CostConfig&) = default;

 private:
  double c_;
  double delta_;
};

/// t_W = (2 sigma / gap) * sqrt(K c ln(K / delta)).
double wait_time(double gap, double sigma, std::size_t K, const CostConfig& cost);

/// lambda = max(1, round(c K)), rounding half up.
std::int64_t sampling_period(std::size_t K, const CostConfig& cost);

/// w_{tau,r} = 2 tau / (r (r + 1)) for 1 <= tau <= r.
double weight(std::int64_t tau, std::int64_t r);

/// U_t = (sigma / t) sqrt(lambda ln(2 K t^2 / (lambda^2 delta))) at a sampling
/// time t (a positive multiple of lambda). PS-WSE eliminates below 2 U_t.
double confidence_radius(std::int64_t t, std::int64_t lambda, double sigma, std::size_t K,
                         const CostConfig& cost);

/// T_j = (6 sigma / gap_j) sqrt(lambda ln(36 K sigma^2 / (lambda delta gap_j^2))).
double elimination_time_bound(double gap, double sigma, std::int64_t lambda, std::size_t K,
                              const CostConfig& cost);

struct WtcsCostBound {
  double exact;       // (2 sigma / gap)(2 + 1/(K c)) sqrt(K c ln(K / delta))
  double simplified;  // (6 sigma / gap) sqrt(K c ln(K / delta))
};

WtcsCostBound wtcs_cost_bound(double gap, double sigma, std::size_t K, const CostConfig& cost);

/// Upper bound on the PS-WSE cost when it identifies the best arm:
///
///   6 sigma (cK + 2c) / D2 * sqrt(ln(36 sigma^2 / (c delta D2^2)) / (cK))
///     + sum over the remaining arms j of
///       6 c sigma / Dj * sqrt(ln(36 sigma^2 / (c delta Dj^2)) / (cK))
///
/// with D2 the smallest gap. The period is the unrounded cK.
double pswse_cost_bound(const Instance& inst, const CostConfig& cost);

}  // namespace dvbai
