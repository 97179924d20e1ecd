#include "dvbai/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dvbai {

Instance::Instance(std::vector<double> means, double sigma)
    : means_(std::move(means)), sigma_(sigma), best_(0) {
  if (means_.empty()) throw std::invalid_argument("Instance: at least one arm is required");
  if (!std::isfinite(sigma_) || sigma_ < 0.0)
    throw std::invalid_argument("Instance: sigma must be finite and non-negative");
  for (double m : means_)
    if (!std::isfinite(m)) throw std::invalid_argument("Instance: means must be finite");

  best_ = static_cast<ArmIndex>(std::max_element(means_.begin(), means_.end()) - means_.begin());
  const auto ties = std::count(means_.begin(), means_.end(), means_[best_]);
  if (ties > 1) throw std::invalid_argument("Instance: best arm is not unique");
}

double Instance::mean(ArmIndex arm) const {
  if (arm >= means_.size())
    throw std::invalid_argument("Instance: arm index " + std::to_string(arm) + " out of range");
  return means_[arm];
}

Instance Instance::shifted(double beta) const {
  std::vector<double> moved(means_);
  for (double& m : moved) m += beta;
  return Instance(std::move(moved), sigma_);
}

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p must lie in (0, 1)");

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double uniform_open01(const RngStream& stream, ArmIndex arm, Round t) {
  if (t < 0 || static_cast<std::uint64_t>(t) > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("uniform_open01: round outside the 32-bit counter range");
  if (arm > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("uniform_open01: arm outside the 32-bit counter range");

  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(arm),
      static_cast<std::uint32_t>(stream.trial_index),
      static_cast<std::uint32_t>(stream.trial_index >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(stream.master_seed),
                                            static_cast<std::uint32_t>(stream.master_seed >> 32)};
  const auto block = philox4x32_10(ctr, key);
  const std::uint64_t bits = (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
  // 53 bits, offset by half an ulp so 0 and 1 are unreachable.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(const RngStream& stream, ArmIndex arm, Round t) {
  return inverse_normal_cdf(uniform_open01(stream, arm, t));
}

double sample_reward(const Instance& inst, ArmIndex arm, Round t, const RngStream& stream) {
  if (arm >= inst.num_arms())
    throw std::invalid_argument("sample_reward: arm index " + std::to_string(arm) +
                                " out of range for K=" + std::to_string(inst.num_arms()));
  if (t < 1) throw std::invalid_argument("sample_reward: round must be >= 1");
  const double scale = inst.sigma() / std::sqrt(static_cast<double>(t));
  return inst.mean(arm) + scale * standard_normal(stream, arm, t);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ull * (stream_id + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<double> gaps(const Instance& inst) {
  if (inst.num_arms() < 2) throw std::invalid_argument("gaps: need at least two arms");
  const double best = inst.mean(inst.best_arm());
  std::vector<double> out;
  out.reserve(inst.num_arms());
  for (double m : inst.means()) out.push_back(best - m);
  return out;
}

double min_gap(const Instance& inst) {
  const auto g = gaps(inst);
  double smallest = std::numeric_limits<double>::infinity();
  for (double d : g)
    if (d > 0.0) smallest = std::min(smallest, d);
  return smallest;
}

}  // namespace dvbai
