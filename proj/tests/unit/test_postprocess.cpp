#include <tom/postprocess.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace tom;

namespace {

const ProblemSpec kSpec = make_mbb_problem(30, 10);

Eigen::VectorXd blank() { return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kSpec.grid.element_count())); }

void fill(Eigen::VectorXd& v, int i0, int i1, int j0, int j1, double value = 1.0) {
  for (int j = j0; j < j1; ++j)
    for (int i = i0; i < i1; ++i) v(kSpec.grid.element(i, j)) = value;
}

// Top bar from the loaded corner, a column down to the bottom-right support.
Eigen::VectorXd attached_body() {
  Eigen::VectorXd v = blank();
  fill(v, 0, 30, 7, 10);
  fill(v, 26, 30, 0, 7);
  return v;
}

std::vector<char> mask_of(const DensityGrid& rho) {
  std::vector<char> m(static_cast<std::size_t>(rho.size()));
  for (Eigen::Index e = 0; e < rho.size(); ++e) m[static_cast<std::size_t>(e)] = rho[e] > 0.5;
  return m;
}

}  // namespace

TEST(Components, Labels) {
  const Grid2D g(4, 3, 4, 3);
  // 1 1 0 1      (top row)
  // 0 0 0 1
  // 1 0 1 1      (bottom row)
  const std::vector<char> mask{1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 1};
  int count = 0;
  const auto labels = label_components(g, mask, &count);
  EXPECT_EQ(count, 3);
  EXPECT_EQ(labels, (std::vector<int>{1, 0, 2, 2, 0, 0, 0, 2, 3, 3, 0, 2}));
}

TEST(Closing, FillsHoleKeepsRectangle) {
  const Grid2D g(8, 8, 1, 1);
  std::vector<char> solid(64, 1);
  solid[static_cast<std::size_t>(g.element(3, 4))] = 0;
  EXPECT_EQ(close_3x3(g, solid), std::vector<char>(64, 1));
  std::vector<char> box(64, 0);
  for (int j = 2; j < 6; ++j)
    for (int i = 0; i < 5; ++i) box[static_cast<std::size_t>(g.element(i, j))] = 1;
  EXPECT_EQ(close_3x3(g, box), box);
}

TEST(PostprocessA, RemovesFloater) {
  Eigen::VectorXd v = attached_body();
  fill(v, 10, 13, 2, 5, 0.9);
  const auto out = postprocess_a(DensityGrid(kSpec.grid, v), kSpec);
  EXPECT_EQ(out.components, 1);
  EXPECT_EQ(out.removed_components, 1);
  EXPECT_FALSE(out.empty);
  EXPECT_EQ(mask_of(out.rho), mask_of(DensityGrid(kSpec.grid, attached_body())));
}

TEST(PostprocessA, FillsSinglePixelHole) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(blank().size());
  v(kSpec.grid.element(14, 5)) = 0.0;
  const auto out = postprocess_a(DensityGrid(kSpec.grid, v), kSpec);
  EXPECT_EQ(out.rho.values().minCoeff(), 1.0);
}

TEST(PostprocessA, CleanFieldUnchangedAndBinary) {
  const Eigen::VectorXd v = attached_body();
  const auto out = postprocess_a(DensityGrid(kSpec.grid, v), kSpec);
  EXPECT_EQ(out.removed_components, 0);
  for (Eigen::Index e = 0; e < v.size(); ++e) EXPECT_EQ(out.rho[e], v(e) > 0.5 ? 1.0 : kDensityFloor);
}

TEST(PostprocessA, Idempotent) {
  std::mt19937_64 r(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd v = blank();
    for (auto& x : v) x = u(r) < 0.55 ? 1.0 : 0.0;
    const auto once = postprocess_a(DensityGrid(kSpec.grid, v), kSpec);
    const auto twice = postprocess_a(once.rho, kSpec);
    EXPECT_TRUE(once.rho.values() == twice.rho.values()) << "trial " << trial;
  }
}

TEST(PostprocessA, EmptyWhenNothingAnchored) {
  Eigen::VectorXd v = blank();
  fill(v, 10, 14, 3, 6);
  const auto out = postprocess_a(DensityGrid(kSpec.grid, v), kSpec);
  EXPECT_TRUE(out.empty);
  EXPECT_EQ(out.components, 0);
  EXPECT_EQ(out.rho.values().maxCoeff(), kDensityFloor);
}
