#include <gtest/gtest.h>

#include "papal/schedule.hpp"
#include "papal/types.hpp"

using namespace papal;

TEST(Schedule, DefaultSolvesQuadratic) {
  for (double l2 : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const auto s = default_schedule(l2);
    EXPECT_NEAR(s.mu * s.mu - (2 + l2 * l2) * s.mu + 1, 0.0, 1e-12) << l2;
    EXPECT_GT(s.mu, 0.0);
    EXPECT_LE(s.mu, 1.0);
    EXPECT_NEAR(s.tau, l2 * s.mu / (1 - s.mu), 1e-12 * s.tau);
    EXPECT_EQ(s.tau, s.eta);
  }
}

TEST(Schedule, GoldenRatioAtUnitLambda) {
  EXPECT_NEAR(default_schedule(1.0).mu, (3 - std::sqrt(5.0)) / 2, 1e-15);
  EXPECT_NEAR(default_schedule(1.0).mu, 0.381966, 1e-6);
}

TEST(Schedule, DefaultIsValid) {
  for (double l2 : {0.01, 0.1, 1.0, 5.0}) {
    EXPECT_TRUE(validate_schedule(default_schedule(l2), l2, 200).empty()) << l2;
  }
}

TEST(Schedule, GammaIsInverseMuPower) {
  const auto s = default_schedule(0.5);
  EXPECT_DOUBLE_EQ(s.log_gamma_at(0), 0.0);
  EXPECT_NEAR(s.log_gamma_at(7), -7 * std::log(s.mu), 1e-12);
}

TEST(Schedule, OverridesApplyPerStep) {
  auto s = default_schedule(1.0);
  s.overrides[3].tau = 0.1;
  EXPECT_DOUBLE_EQ(s.tau_at(3), 0.1);
  EXPECT_DOUBLE_EQ(s.tau_at(4), s.tau);
  EXPECT_DOUBLE_EQ(s.eta_at(3), s.eta);
}

TEST(Schedule, DetectsEachViolation) {
  const double l2 = 1.0;
  {
    auto s = default_schedule(l2);
    s.overrides[2].tau = s.tau * 2;  // breaks gamma_t tau_t <= gamma_{t-1}(tau_{t-1} + l2)
    const auto v = validate_schedule(s, l2, 5);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front().t, 2);
  }
  {
    auto s = default_schedule(l2);
    s.overrides[2].mu = 1.5;
    bool found = false;
    for (const auto& v : validate_schedule(s, l2, 5)) found |= v.condition == "mu_t <= 1";
    EXPECT_TRUE(found);
  }
  {
    auto s = default_schedule(l2);
    s.overrides[3].tau = s.tau * 0.1;  // too small for tau_t eta_{t-1} >= mu_t
    EXPECT_FALSE(validate_schedule(s, l2, 5).empty());
  }
  {
    auto s = default_schedule(l2);
    s.overrides[4].log_gamma = 0.0;  // breaks gamma_t mu_t = gamma_{t-1}
    EXPECT_FALSE(validate_schedule(s, l2, 5).empty());
  }
}

TEST(Schedule, DescribeMentionsCondition) {
  auto s = default_schedule(1.0);
  s.overrides[1].mu = 2.0;
  const auto v = validate_schedule(s, 1.0, 2);
  ASSERT_FALSE(v.empty());
  EXPECT_NE(describe(v.front()).find("t=1"), std::string::npos);
}

TEST(Schedule, RejectsNonPositiveLambda) { EXPECT_THROW(default_schedule(0.0), InvalidArgument); }
