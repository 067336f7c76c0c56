#include <gtest/gtest.h>

#include <cmath>

#include "hiergen/analytics.hpp"

using namespace hiergen;

TEST(ExpectedRetention, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(expected_retention(1.0, 0.5, 0), 0.5);
  EXPECT_DOUBLE_EQ(expected_retention(1.0, 3.0, 0), 0.5);
  EXPECT_NEAR(expected_retention(5.0, 1.0, 1), 5.0 / 36.0, 1e-15);
  // alpha0=1, lambda=0.5, level 2: (1 * 0.5) / (2 * 1.5 * 1.25)
  EXPECT_NEAR(expected_retention(1.0, 0.5, 2), 0.5 / 3.75, 1e-15);
}

TEST(ExpectedRetention, MatchesRoutedPointsAtLevelTwo) {
  RandomSource rng(21);
  const auto sim = simulate_retention(1.0, 0.5, 2, 1'000'000, rng);
  const double expected = expected_retention(1.0, 0.5, 2);
  EXPECT_NEAR(sim[2].value, expected, 3 * sim[2].std_error);
}

TEST(ExpectedRetention, PartialSumsBoundedByOne) {
  for (double a : {0.2, 1.0, 5.0, 25.0}) {
    for (double l : {0.5, 1.0, 1.5}) {
      double sum = 0.0;
      for (std::size_t n = 0; n <= 64; ++n) {
        const double e = expected_retention(a, l, n);
        EXPECT_GE(e, 0.0);
        if (n <= 8) {
          EXPECT_GT(e, 0.0);
        }
        EXPECT_LT(e, 1.0);
        sum += e;
        EXPECT_LE(sum, 1.0 + 1e-12);
      }
    }
  }
}

TEST(RetentionVariance, ClosedFormValues) {
  EXPECT_NEAR(retention_variance(1.0, 0.5, 0), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(retention_variance(5.0, 0.5, 0), 5.0 / (36.0 * 7.0), 1e-15);
}

TEST(RetentionVariance, MatchesStickProductAcrossTrees) {
  // Per-tree level-1 retention along one descent path: (1 - nu0) * nu1.
  RandomSource rng(22);
  constexpr int trees = 10'000;
  std::vector<double> values;
  for (int t = 0; t < trees; ++t) {
    const double nu0 = draw_beta_one(rng, 1.0);
    const double nu1 = draw_beta_one(rng, 1.0);
    values.push_back((1 - nu0) * nu1);
  }
  const auto m = sample_moments_with_errors(values);
  const double expected = retention_variance(1.0, 1.0, 1);
  EXPECT_NEAR(m.variance, expected, 0.05 * expected);
}

TEST(ChildSelection, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(expected_child_selection(1.0, 1), 0.5);
  EXPECT_DOUBLE_EQ(expected_child_selection(1.0, 2), 0.25);
  EXPECT_NEAR(expected_child_selection(0.2, 1), 1.0 / 1.2, 1e-15);
  EXPECT_NEAR(child_selection_variance(1.0, 1), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(child_selection_variance(0.2, 1), 0.2 / (1.44 * 2.2), 1e-15);
  EXPECT_THROW(expected_child_selection(1.0, 0), ParameterError);
}

TEST(ChildSelection, GeometricFormSumsToOne) {
  for (double g : {0.2, 1.0}) {
    double sum = 0.0;
    for (std::size_t n = 1; n <= 64; ++n) sum += expected_child_selection(g, n);
    // tail beyond 64 is (g/(1+g))^64; for g=1 that is 5.4e-20.
    EXPECT_NEAR(sum, 1.0, 1e-12) << g;
  }
}

TEST(ChildSelection, SimulationConfirmsGeometricForm) {
  RandomSource rng(23);
  const auto sim = simulate_child_selection(1.0, 3, 1'000'000, rng);
  EXPECT_NEAR(sim[1].value, 0.25, 3 * sim[1].std_error);
  EXPECT_NEAR(sim[0].value, 0.5, 3 * sim[0].std_error);
}

TEST(ChildSelectionVariance, MatchesSharesAcrossTrees) {
  // Index-2 share of a fresh stick sequence: (1 - psi1) * psi2.
  RandomSource rng(24);
  std::vector<double> shares;
  for (int t = 0; t < 10'000; ++t) {
    const double psi1 = draw_beta_one(rng, 1.0);
    const double psi2 = draw_beta_one(rng, 1.0);
    shares.push_back((1 - psi1) * psi2);
  }
  const auto m = sample_moments_with_errors(shares);
  const double expected = child_selection_variance(1.0, 2);
  EXPECT_NEAR(m.variance, expected, 0.05 * expected);
}

TEST(SigmaRatio, ClosedFormValues) {
  const auto a = expected_sigma_ratio(1, 5);
  EXPECT_NEAR(a.mean, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(a.variance, 5.0 / 252.0, 1e-15);
  const auto b = expected_sigma_ratio(1, 1);
  EXPECT_DOUBLE_EQ(b.mean, 0.5);
  EXPECT_NEAR(b.variance, 1.0 / 12.0, 1e-15);
  EXPECT_DOUBLE_EQ(expected_sigma_ratio(2, 2).mean, 0.5);
}

TEST(PredictRegime, QuadrantsAndBoundaries) {
  auto r = predict_regime(1.0, 0.5, 0.2);
  EXPECT_EQ(r.depth, DepthRegime::kShallowTop);
  EXPECT_EQ(r.width, WidthRegime::kNarrow);
  r = predict_regime(25.0, 0.5, 1.0);
  EXPECT_EQ(r.depth, DepthRegime::kDeepMidMass);
  EXPECT_EQ(r.width, WidthRegime::kChaotic);
  r = predict_regime(1.0, 1.0, 1.0);
  EXPECT_EQ(r.depth, DepthRegime::kChaotic);
  EXPECT_EQ(r.width, WidthRegime::kChaotic);
  EXPECT_EQ(predict_regime(0.5, 2.0, 3.0).depth, DepthRegime::kDeeperTop);
  EXPECT_EQ(predict_regime(0.5, 2.0, 3.0).width, WidthRegime::kWide);
  EXPECT_EQ(predict_regime(5.0, 1.0, 0.2).depth, DepthRegime::kDeepSpreadTop);
}
