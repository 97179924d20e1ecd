// Reward generation for Gaussian bandits whose noise shrinks as sigma^2 / t.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dvbai {

// Arms are zero-based throughout the library.
using ArmIndex = std::size_t;
using Round = std::int64_t;

/// A bandit instance: one mean per arm plus the base noise scale sigma.
///
/// The best arm must be unique; construction rejects ties at the maximum.
/// Means are kept in caller order, so the best arm can be any index.
class Instance {
 public:
  Instance(std::vector<double> means, double sigma);

  std::size_t num_arms() const { return means_.size(); }
  std::span<const double> means() const { return means_; }
  double mean(ArmIndex arm) const;
  double sigma() const { return sigma_; }
  ArmIndex best_arm() const { return best_; }

  /// Same instance with every mean moved by `beta`.
  Instance shifted(double beta) const;

 private:
  std::vector<double> means_;
  double sigma_;
  ArmIndex best_;
};

/// Identifies the randomness of one trial. Every draw is a pure function of
/// (master_seed, trial_index, arm, round), so streams carry no state.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Wichura's AS241 (PPND16) inverse of the standard normal CDF, p in (0, 1).
double inverse_normal_cdf(double p);

/// Uniform in the open interval (0, 1) for the given draw coordinates.
double uniform_open01(const RngStream& stream, ArmIndex arm, Round t);

/// Standard normal draw Z for (arm, round): inverse_normal_cdf(uniform_open01(...)).
double standard_normal(const RngStream& stream, ArmIndex arm, Round t);

/// Reward of `arm` in round `t`: mu_arm + (sigma / sqrt(t)) * Z.
/// Throws std::invalid_argument for an out-of-range arm or t < 1.
double sample_reward(const Instance& inst, ArmIndex arm, Round t, const RngStream& stream);

/// Mixes a sub-stream id into a master seed (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id);

/// Delta_k = mu_best - mu_k for every arm, in input order. Requires K >= 2.
std::vector<double> gaps(const Instance& inst);

/// Smallest positive gap (best vs. runner-up). Requires K >= 2.
double min_gap(const Instance& inst);

}  // namespace dvbai
