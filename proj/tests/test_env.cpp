#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dvbai/env.hpp"

using namespace dvbai;

// ------------------------------- Instance ------------------------------------
TEST(Instance, ResolvesBestArmFromUnsortedMeans) {
  Instance inst({1.0, 4.0, 2.5}, 1.0);
  EXPECT_EQ(inst.num_arms(), 3u);
  EXPECT_EQ(inst.best_arm(), 1u);
}

TEST(Instance, RejectsTiedBestArm) {
  EXPECT_THROW(Instance({2.0, 2.0, 1.0}, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(Instance({3.0, 1.0, 1.0}, 1.0));  // ties below the top are fine
}

TEST(Instance, RejectsEmptyAndBadSigma) {
  EXPECT_THROW(Instance({}, 1.0), std::invalid_argument);
  EXPECT_THROW(Instance({1.0}, -1.0), std::invalid_argument);
  EXPECT_THROW(Instance({1.0}, std::nan("")), std::invalid_argument);
}

// --------------------------------- gaps --------------------------------------
TEST(Gaps, DirectSubtraction) {
  const auto g = gaps(Instance({3.0, 2.5, 2.0}, 1.0));
  ASSERT_EQ(g.size(), 3u);
  EXPECT_DOUBLE_EQ(g[0], 0.0);
  EXPECT_DOUBLE_EQ(g[1], 0.5);
  EXPECT_DOUBLE_EQ(g[2], 1.0);
  EXPECT_DOUBLE_EQ(min_gap(Instance({3.0, 2.5, 2.0}, 1.0)), 0.5);
}

TEST(Gaps, BestArmNeedNotBeFirst) {
  const Instance inst({0.0, 3.0}, 1.0);
  const auto g = gaps(inst);
  EXPECT_DOUBLE_EQ(g[0], 3.0);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
  EXPECT_DOUBLE_EQ(min_gap(inst), 3.0);
}

TEST(Gaps, FiveArmsSpacedByHalf) {
  const Instance inst({2.0, 1.5, 1.0, 0.5, 0.0}, 10.0);
  EXPECT_DOUBLE_EQ(min_gap(inst), 0.5);
  EXPECT_DOUBLE_EQ(gaps(inst)[4], 2.0);
}

TEST(Gaps, SingleArmIsAnError) {
  EXPECT_THROW(gaps(Instance({1.0}, 1.0)), std::invalid_argument);
}

// ------------------------------- Philox --------------------------------------
// Known-answer vectors published with Random123.
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu}),
            (A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}),
            (A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

// --------------------------- inverse normal CDF ------------------------------
// Reference quantiles at the exact double p, from 40-digit arithmetic
// (sqrt(2) erfinv(2p - 1)).
TEST(InverseNormalCdf, MatchesHighPrecisionQuantiles) {
  const std::vector<std::pair<double, double>> cases = {
      {1e-20, -9.26234008979840757957},  {0.001, -3.09023230616781353536},
      {0.02425, -1.9729610513118848376}, {0.1, -1.28155156554460043533},
      {0.3, -0.524400512708040815969},   {0.5, 0.0},
      {0.75, 0.674489750196081743202},   {0.975, 1.9599639845400538556},
      {0.999999, 4.75342430881708776569}};
  for (auto [p, z] : cases) EXPECT_NEAR(inverse_normal_cdf(p), z, 1e-14 * (1.0 + std::fabs(z))) << p;
}

TEST(InverseNormalCdf, InvertsErfc) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(1e-12, 1.0 - 1e-12);
  for (int i = 0; i < 2000; ++i) {
    const double p = u(gen);
    const double z = inverse_normal_cdf(p);
    const double back = 0.5 * std::erfc(-z / std::sqrt(2.0));
    EXPECT_NEAR(back, p, 1e-13 * std::max(p, 1e-3));
  }
}

TEST(InverseNormalCdf, RejectsClosedEndpoints) {
  EXPECT_THROW(inverse_normal_cdf(0.0), std::domain_error);
  EXPECT_THROW(inverse_normal_cdf(1.0), std::domain_error);
}

// ------------------------------ sample_reward --------------------------------
TEST(SampleReward, ZeroNoiseReturnsMean) {
  const Instance inst({1.25, -3.0, 0.5}, 0.0);
  const RngStream s{11, 4};
  for (ArmIndex k = 0; k < 3; ++k)
    for (Round t : {1, 2, 1000})
      EXPECT_EQ(sample_reward(inst, k, t, s), inst.mean(k));
}

TEST(SampleReward, RejectsBadArmOrRound) {
  const Instance inst({1.0, 0.0}, 1.0);
  EXPECT_THROW(sample_reward(inst, 2, 1, {}), std::invalid_argument);
  EXPECT_THROW(sample_reward(inst, 0, 0, {}), std::invalid_argument);
}

TEST(SampleReward, SameCoordinatesSameValue) {
  const Instance inst({0.0, 1.0}, 10.0);
  const RngStream s{99, 7};
  EXPECT_EQ(sample_reward(inst, 1, 17, s), sample_reward(inst, 1, 17, RngStream{99, 7}));
  EXPECT_NE(sample_reward(inst, 1, 17, s), sample_reward(inst, 1, 17, RngStream{99, 8}));
  EXPECT_NE(sample_reward(inst, 1, 17, s), sample_reward(inst, 0, 17, s));
}

// The first draws of one stream, frozen so a change to the generator or the
// normal transform is caught.
TEST(SampleReward, FrozenStream) {
  const RngStream s{1, 0};
  const double z1 = standard_normal(s, 0, 1);
  const double z2 = standard_normal(s, 0, 2);
  const double z3 = standard_normal(s, 3, 1);
  // Independently derived from the Philox block.
  const auto block = philox4x32_10({1, 0, 0, 0}, {1, 0});
  const std::uint64_t bits = (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
  const double u = (static_cast<double>(bits >> 11) + 0.5) / 9007199254740992.0;
  EXPECT_EQ(uniform_open01(s, 0, 1), u);
  EXPECT_EQ(z1, inverse_normal_cdf(u));
  // Reference values from a separate Philox implementation and 40-digit erfinv.
  EXPECT_NEAR(z1, 0.44543771448889127663, 1e-15);
  EXPECT_NEAR(z2, -0.68268969203011013069, 1e-15);
  EXPECT_NEAR(z3, 0.12571933748136070931, 1e-15);
}

TEST(SampleReward, StandardDeviationIsSigmaOverRootT) {
  const Instance inst({0.0, 0.0 - 1.0}, 10.0);
  const int n = 1'000'000;
  long double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_reward(inst, 0, 4, RngStream{5, static_cast<std::uint64_t>(i)});
    sum += x;
    sum2 += static_cast<long double>(x) * x;
  }
  const double mean = static_cast<double>(sum / n);
  const double var = static_cast<double>((sum2 - n * static_cast<long double>(mean) * mean) / (n - 1));
  EXPECT_NEAR(std::sqrt(var), 5.0, 0.05);
}

TEST(SampleReward, VarianceConvergesForSeveralRounds) {
  const Instance inst({1.0, 0.0}, 3.0);
  const int n = 1'000'000;
  for (Round t : {1, 7, 250}) {
    long double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_reward(inst, 1, t, RngStream{77, static_cast<std::uint64_t>(i)});
      sum += x;
      sum2 += static_cast<long double>(x) * x;
    }
    const long double mean = sum / n;
    const double var = static_cast<double>((sum2 - n * mean * mean) / (n - 1));
    const double expected = 9.0 / static_cast<double>(t);
    EXPECT_NEAR(var / expected, 1.0, 0.02) << "t=" << t;
  }
}

TEST(SampleReward, TranslationMovesEveryDrawByBeta) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> mean(-5.0, 5.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> means{mean(gen), mean(gen), mean(gen)};
    if (means[0] == means[1] || means[1] == means[2] || means[0] == means[2]) continue;
    const Instance a(means, 2.0);
    const double beta = 17.3;
    const Instance b = a.shifted(beta);
    const RngStream s{static_cast<std::uint64_t>(rep), 3};
    for (ArmIndex k = 0; k < 3; ++k)
      for (Round t = 1; t <= 50; ++t)
        EXPECT_NEAR(sample_reward(b, k, t, s), sample_reward(a, k, t, s) + beta, 1e-12);
  }
}

TEST(SampleReward, FullReplayIsIdentical) {
  const Instance inst({0.3, 0.1, 0.0}, 10.0);
  std::vector<double> first, second;
  for (Round t = 1; t <= 300; ++t)
    for (ArmIndex k = 0; k < 3; ++k) first.push_back(sample_reward(inst, k, t, {42, 9}));
  for (Round t = 1; t <= 300; ++t)
    for (ArmIndex k = 0; k < 3; ++k) second.push_back(sample_reward(inst, k, t, {42, 9}));
  EXPECT_EQ(first, second);
}

TEST(SampleReward, DistinctTrialsAreUncorrelated) {
  const int n = 200'000;
  double sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = standard_normal({1, 0}, 0, i + 1);
    const double y = standard_normal({1, 1}, 0, i + 1);
    sxy += x * y;
  }
  // Sample correlation of independent normals has sd 1/sqrt(n).
  EXPECT_LT(std::fabs(sxy / n), 5.0 / std::sqrt(static_cast<double>(n)));
}

TEST(DeriveSeed, SpreadsNeighbouringIds) {
  EXPECT_NE(derive_seed(7, 0), derive_seed(7, 1));
  EXPECT_NE(derive_seed(7, 0), derive_seed(8, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}
