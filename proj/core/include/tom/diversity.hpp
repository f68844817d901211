#pragma once

#include "tom/boundary.hpp"
#include "tom/density.hpp"
#include "tom/wire_net.hpp"

#include <Eigen/Core>

#include <vector>

namespace tom {

struct DiversityReport {
  Eigen::MatrixXd pairwise;
  double delta = 0.0;
  std::vector<int> nearest;  // per shape, index of the closest other shape
};

/// delta = (sum_j sqrt(min_{k != j} d_jk))^2 for a symmetric, non-negative
/// dissimilarity matrix with at least two shapes.
DiversityReport diversity_delta(const Eigen::MatrixXd& pairwise);

/// Symmetrized chamfer matrix; pairs involving an empty cloud are 0.
Eigen::MatrixXd chamfer_matrix(const std::vector<BoundaryCloud>& clouds, int threads = 1);

struct DiversityGradient {
  DiversityReport report;
  /// d delta / d x for every boundary point, one matrix per cloud.
  std::vector<Eigen::Matrix2Xd> point_grads;
  int coincident = 0;
  int empty_clouds = 0;
};

/// delta over the clouds and its gradient with respect to each boundary
/// point. Only the first argument of each one-sided term carries gradient;
/// nearest-neighbour correspondences are held fixed.
DiversityGradient diversity_gradient(const std::vector<BoundaryCloud>& clouds, int threads = 1);

struct LevelSetBackpropStats {
  int used = 0;
  int skipped = 0;
};

/// Pushes spatial gradients dL/dx at boundary points into parameter space
/// through the level-set relation dx = -grad f / |grad f|^2 df: each point
/// contributes an upstream -(g . grad f) / |grad f|^2 on the field value.
/// Points with |grad f|^2 < 1e-12 are skipped. `mods[c]` is the modulation
/// of clouds[c]. Accumulates into `grad`.
LevelSetBackpropStats diversity_backprop(const WireNet& net, const std::vector<BoundaryCloud>& clouds,
                                         const std::vector<Eigen::Vector2d>& mods,
                                         const std::vector<Eigen::Matrix2Xd>& point_upstream, Eigen::VectorXd& grad);

/// Upstream on the field value for one cloud (exposed for tests).
Eigen::VectorXd level_set_upstream(const Eigen::Matrix2Xd& field_grad, const Eigen::Matrix2Xd& point_upstream,
                                   int* skipped = nullptr);

/// Mean absolute density difference times the domain area; for binary
/// fields this is Vol(A u B) - Vol(A n B).
double l1_volumetric_dissimilarity(const DensityGrid& a, const DensityGrid& b);

}  // namespace tom
