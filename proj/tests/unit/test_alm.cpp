#include <tom/alm.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace tom;

TEST(Alm, FirstViolationUpdate) {
  AlmState s(1, {.mu0 = 1.0});
  s = alm_update(s, {0.5});
  EXPECT_DOUBLE_EQ(s.constraints[0].lambda, 0.5);
  EXPECT_DOUBLE_EQ(s.constraints[0].mu, 1.0);
}

TEST(Alm, SatisfiedDecays) {
  AlmState s(2, {.mu0 = 2.0, .decay = 0.05});
  s.constraints[0].lambda = 1.0;
  s.constraints[1].lambda = 3.0;
  for (int k = 0; k < 30; ++k) s = alm_update(s, {0.0, 0.0});
  EXPECT_NEAR(s.constraints[0].lambda, std::pow(0.95, 30), 1e-14);
  EXPECT_NEAR(s.constraints[1].lambda, 3.0 * std::pow(0.95, 30), 1e-14);
  EXPECT_EQ(s.constraints[0].mu, 2.0);
  EXPECT_EQ(s.constraints[1].mu, 2.0);
}

TEST(Alm, ConstantViolationGrowsPenalty) {
  AlmState s(1, {.mu0 = 1.0, .growth = 1.5, .patience = 10});
  for (int k = 0; k < 10; ++k) s = alm_update(s, {0.2});
  EXPECT_EQ(s.constraints[0].mu, 1.0);
  s = alm_update(s, {0.2});
  EXPECT_DOUBLE_EQ(s.constraints[0].mu, 1.5);
  // The window restarts after growth.
  for (int k = 0; k < 10; ++k) s = alm_update(s, {0.2});
  EXPECT_DOUBLE_EQ(s.constraints[0].mu, 1.5);
  s = alm_update(s, {0.2});
  EXPECT_DOUBLE_EQ(s.constraints[0].mu, 2.25);
}

TEST(Alm, DecreasingViolationKeepsPenalty) {
  AlmState s(1, {.patience = 3});
  double v = 1.0;
  for (int k = 0; k < 20; ++k) {
    s = alm_update(s, {v});
    v *= 0.9;
  }
  EXPECT_EQ(s.constraints[0].mu, 1.0);
}

TEST(Alm, DipWithinWindowKeepsPenalty) {
  AlmState s(1, {});
  // Ends above where it started, but is satisfied once along the way.
  for (int t = 0; t < 30; ++t) s = alm_update(s, {t % 7 == 3 ? 0.0 : 0.2 + 0.001 * t});
  EXPECT_EQ(s.constraints[0].mu, 1.0);
}

TEST(Alm, InvariantsUnderRandomViolations) {
  std::mt19937_64 r(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  AlmState s(3, {});
  for (int k = 0; k < 500; ++k) {
    std::vector<double> v(3);
    for (auto& x : v) x = u(r) < 0.4 ? 0.0 : u(r);
    const AlmState next = alm_update(s, v);
    for (int i = 0; i < 3; ++i) {
      EXPECT_GE(next.constraints[i].lambda, 0.0);
      EXPECT_GE(next.constraints[i].mu, s.constraints[i].mu);
    }
    s = next;
  }
}

TEST(Alm, CoefficientAndPenalty) {
  AlmState s(1, {.mu0 = 4.0});
  s.constraints[0].lambda = 0.5;
  EXPECT_DOUBLE_EQ(s.coefficient(0, 0.25), 1.5);
  EXPECT_DOUBLE_EQ(s.penalty(0, 0.25), 0.125 + 0.125);
  // The coefficient is the derivative of the penalty in c.
  const double h = 1e-6;
  EXPECT_NEAR((s.penalty(0, 0.3 + h) - s.penalty(0, 0.3 - h)) / (2 * h), s.coefficient(0, 0.3), 1e-8);
}

TEST(Alm, RejectsBadInput) {
  EXPECT_THROW(AlmState(1, {.mu0 = 0.0}), std::invalid_argument);
  EXPECT_THROW(AlmState(1, {.growth = 0.5}), std::invalid_argument);
  EXPECT_THROW(alm_update(AlmState(2, {}), {0.1}), std::invalid_argument);
}
