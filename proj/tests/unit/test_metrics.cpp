#include <tom/metrics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tom;

namespace {

const Grid2D kGrid(20, 12, 2.0, 1.2);

DensityGrid point_mass(const Grid2D& g, int i, int j) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.element_count()));
  v(g.element(i, j)) = 1.0;
  return {g, v};
}

DensityGrid random_field(std::mt19937_64& r, const Grid2D& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(g.element_count()));
  for (auto& x : v) x = u(r);
  return {g, v};
}

DensityGrid rect(const Grid2D& g, int i0, int i1, int j0, int j1, double low = 0.0) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.element_count()), low);
  for (int j = j0; j < j1; ++j)
    for (int i = i0; i < i1; ++i) v(g.element(i, j)) = 1.0;
  return {g, v};
}

}  // namespace

TEST(LoadViolation, FullAndVoid) {
  const auto spec = make_mbb_problem(30, 10);
  EXPECT_EQ(load_violation(DensityGrid::uniform(spec.grid, 1.0), spec), 0);
  EXPECT_EQ(load_violation(DensityGrid::uniform(spec.grid, 0.01), spec), 1);
  EXPECT_EQ(load_violation(DensityGrid::uniform(spec.grid, 0.5), spec), 1);  // tau itself counts as void
}

TEST(LoadViolation, OneOfTwoLoadsBothReadings) {
  const auto spec = make_cantilever_problem(15, 10);
  const auto loads = spec.load_nodes();
  ASSERT_EQ(loads.size(), 2u);
  const Grid2D& g = spec.grid;
  Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.element_count()), 0.01);
  // Material only in the element just left of and below the first load.
  const auto [i, j] = g.node_ij(loads[0]);
  v(g.element(i - 1, std::max(0, j - 1))) = 1.0;
  const DensityGrid rho(g, v);
  EXPECT_EQ(load_violation(rho, spec, 0.5, LoadViolationMode::Any), 1);
  EXPECT_EQ(load_violation(rho, spec, 0.5, LoadViolationMode::All), 0);
  EXPECT_EQ(load_violation(DensityGrid::uniform(g, 0.01), spec, 0.5, LoadViolationMode::All), 1);
}

TEST(LoadViolation, RatioIsMean) {
  const auto spec = make_mbb_problem(30, 10);
  std::vector<DensityGrid> batch{DensityGrid::uniform(spec.grid, 1.0), DensityGrid::uniform(spec.grid, 0.0),
                                 DensityGrid::uniform(spec.grid, 0.9), DensityGrid::uniform(spec.grid, 0.2)};
  double sum = 0.0;
  for (const auto& r : batch) sum += load_violation(r, spec);
  EXPECT_EQ(load_violation_ratio(batch, spec), sum / 4.0);
  EXPECT_EQ(load_violation_ratio(batch, spec), 0.5);
  EXPECT_EQ(load_violation_ratio({}, spec), 0.0);
}

TEST(SlicedW1, IdenticalIsZero) {
  std::mt19937_64 r(1);
  Rng rng(2);
  const auto a = random_field(r, kGrid);
  EXPECT_NEAR(sliced_w1(a, a, 64, rng), 0.0, 1e-15);
}

TEST(SlicedW1, PointMassesExactAndMonteCarlo) {
  const auto a = point_mass(kGrid, 2, 3), b = point_mass(kGrid, 15, 9);
  const Eigen::Vector2d delta = kGrid.element_centroid(kGrid.element(15, 9)) - kGrid.element_centroid(kGrid.element(2, 3));
  Rng rng(3);
  const auto dirs = random_directions(256, rng);
  double oracle = 0.0;
  for (Eigen::Index k = 0; k < dirs.cols(); ++k) oracle += std::abs(dirs.col(k).dot(delta));
  oracle /= 256;
  EXPECT_NEAR(sliced_w1(a, b, dirs), oracle, 1e-12);
  const double d = delta.norm();
  const double sigma = d * std::sqrt(0.5 - 4.0 / (std::numbers::pi * std::numbers::pi)) / 16.0;
  EXPECT_NEAR(sliced_w1(a, b, dirs), 2.0 / std::numbers::pi * d, 3.0 * sigma);
}

TEST(SlicedW1, TranslationInvariant) {
  Rng rng(4);
  const auto dirs = random_directions(32, rng);
  const double base = sliced_w1(rect(kGrid, 1, 5, 1, 4), rect(kGrid, 6, 9, 2, 8), dirs);
  const double shifted = sliced_w1(rect(kGrid, 8, 12, 3, 6), rect(kGrid, 13, 16, 4, 10), dirs);
  EXPECT_NEAR(base, shifted, 1e-12);
}

TEST(SlicedW1, MetricOnSharedDirections) {
  std::mt19937_64 r(5);
  Rng rng(6);
  const auto dirs = random_directions(64, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_field(r, kGrid), b = random_field(r, kGrid), c = random_field(r, kGrid);
    EXPECT_NEAR(sliced_w1(a, b, dirs), sliced_w1(b, a, dirs), 1e-14);
    EXPECT_LE(sliced_w1(a, c, dirs), sliced_w1(a, b, dirs) + sliced_w1(b, c, dirs) + 1e-14);
  }
}

TEST(SlicedW1, BinarizeAndErrors) {
  Rng rng(7);
  const auto dirs = random_directions(16, rng);
  const auto a = rect(kGrid, 1, 5, 1, 4, 0.3), b = rect(kGrid, 1, 5, 1, 4, 0.0);
  EXPECT_GT(sliced_w1(a, b, dirs), 0.0);
  EXPECT_NEAR(sliced_w1(a, b, dirs, {.binarize = true}), 0.0, 1e-15);
  EXPECT_THROW(sliced_w1(a, DensityGrid::uniform(kGrid, 0.0), dirs), std::invalid_argument);
}

TEST(SlicedW1, MatrixMatchesPairs) {
  std::mt19937_64 r(8);
  Rng rng(9);
  const auto dirs = random_directions(32, rng);
  std::vector<DensityGrid> batch;
  for (int k = 0; k < 4; ++k) batch.push_back(random_field(r, kGrid));
  const auto m = sliced_w1_matrix(batch, dirs, {}, 3);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(m(i, i), 0.0);
    for (int j = 0; j < 4; ++j)
      if (i != j) EXPECT_NEAR(m(i, j), sliced_w1(batch[i], batch[j], dirs), 1e-15);
  }
  EXPECT_TRUE(m == sliced_w1_matrix(batch, dirs, {}, 1));
}

TEST(HillD2, Cases) {
  Eigen::MatrixXd d(2, 2);
  d << 0, 1, 1, 0;
  EXPECT_DOUBLE_EQ(hill_d2(d), 0.5);
  EXPECT_EQ(hill_d2(Eigen::MatrixXd::Zero(4, 4)), 0.0);
  EXPECT_EQ(hill_d2(Eigen::MatrixXd::Zero(1, 1)), 0.0);
  Eigen::MatrixXd e(3, 3);
  e << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  Eigen::MatrixXd p(3, 3);  // shapes reordered as 2, 0, 1
  p << 0, 2, 3, 2, 0, 1, 3, 1, 0;
  EXPECT_DOUBLE_EQ(hill_d2(e), 12.0 / 9.0);
  EXPECT_DOUBLE_EQ(hill_d2(p), hill_d2(e));
}

TEST(Hausdorff, Cases) {
  Eigen::Matrix2Xd a(2, 1), b(2, 1);
  a << 0, 0;
  b << 3, 4;
  EXPECT_DOUBLE_EQ(hausdorff(a, b), 5.0);
  EXPECT_EQ(hausdorff(a, a), 0.0);
  Eigen::Matrix2Xd sub(2, 2), sup(2, 4);
  sub << 0, 1, 0, 0;
  sup << 0, 1, 1, 4, 0, 0, 2, 1;
  // sub is a subset of sup: only distances from sup to sub matter.
  EXPECT_DOUBLE_EQ(hausdorff(sub, sup), std::max(2.0, std::hypot(3.0, 1.0)));
  EXPECT_EQ(hausdorff(sub, sup), hausdorff(sup, sub));
  EXPECT_THROW(hausdorff(a, Eigen::Matrix2Xd(2, 0)), std::invalid_argument);
}

TEST(Dssim, Cases) {
  std::mt19937_64 r(10);
  const Grid2D g(24, 16, 1.5, 1.0);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXd v(static_cast<Eigen::Index>(g.element_count()));
  for (auto& x : v) x = coin(r) ? 1.0 : 0.0;
  const DensityGrid a(g, v), inv(g, (1.0 - v.array()).matrix());
  EXPECT_NEAR(dssim(a, a), 0.0, 1e-12);
  const double anti = dssim(a, inv);
  EXPECT_GT(anti, 0.9);
  EXPECT_LE(anti, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double s = dssim(random_field(r, g), random_field(r, g), 3 + trial % 5);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  EXPECT_THROW(dssim(a, a, 40), std::invalid_argument);
}
