#pragma once

#include "tom/boundary.hpp"
#include "tom/density.hpp"
#include "tom/problem.hpp"
#include "tom/random.hpp"

#include <Eigen/Core>

#include <vector>

namespace tom {

/// Any: a shape violates when some load node has no material around it.
/// All: only when every load node is void.
enum class LoadViolationMode { Any, All };

/// 1 when the load nodes selected by `mode` have every adjacent element at
/// or below tau, 0 otherwise.
int load_violation(const DensityGrid& rho, const ProblemSpec& spec, double tau = 0.5,
                   LoadViolationMode mode = LoadViolationMode::Any);

/// Mean of load_violation over a batch (0 for an empty batch).
double load_violation_ratio(const std::vector<DensityGrid>& batch, const ProblemSpec& spec, double tau = 0.5,
                            LoadViolationMode mode = LoadViolationMode::Any);

/// Unit directions for sliced W1, drawn once and shared across a batch so
/// the resulting dissimilarity is a true metric on that projection set.
Eigen::Matrix2Xd random_directions(int count, Rng& rng);

struct SlicedW1Options {
  /// Binarize at 0.5 before normalizing instead of using raw densities.
  bool binarize = false;
};

/// Mean over the directions of the 1D Wasserstein-1 distance between the
/// normalized density distributions projected onto each direction. Both
/// fields must share a grid and have positive mass.
double sliced_w1(const DensityGrid& a, const DensityGrid& b, const Eigen::Matrix2Xd& directions,
                 const SlicedW1Options& options = {});
double sliced_w1(const DensityGrid& a, const DensityGrid& b, int n_projections, Rng& rng,
                 const SlicedW1Options& options = {});

/// Pairwise sliced W1 on one shared projection set.
Eigen::MatrixXd sliced_w1_matrix(const std::vector<DensityGrid>& batch, const Eigen::Matrix2Xd& directions,
                                 const SlicedW1Options& options = {}, int threads = 1);

/// Mean over all M^2 ordered pairs, diagonal included.
double hill_d2(const Eigen::MatrixXd& pairwise);

/// max(sup_a inf_b |a - b|, sup_b inf_a |a - b|). Both clouds must be
/// non-empty.
double hausdorff(const BoundaryCloud& a, const BoundaryCloud& b);
double hausdorff(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b);

/// (1 - mean SSIM) / 2 over all window x window patches (stride 1, data
/// range 1, c1 = 1e-4, c2 = 9e-4, sample statistics). Clamped to [0, 1].
double dssim(const DensityGrid& a, const DensityGrid& b, int window = 7);

struct MetricsRow {
  int shape = 0;
  double compliance = 0.0;
  double volume_fraction = 0.0;
  int load_violation = 0;
  std::vector<double> dissimilarity;  // sliced W1 to every shape of the batch
};

}  // namespace tom
