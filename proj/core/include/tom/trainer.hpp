#pragma once

#include "tom/alm.hpp"
#include "tom/config.hpp"
#include "tom/density.hpp"
#include "tom/geometric.hpp"
#include "tom/problem.hpp"
#include "tom/wire_net.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tom {

class TrainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Constraint slots, in ALM order.
enum ConstraintId : int { kVolume = 0, kDiversity, kInterface, kNormal, kDesignRegion, kConstraintCount };

const char* constraint_name(int id);

struct ShapeRow {
  int iteration = 0;
  int shape = 0;
  double compliance = 0.0;
  double volume_fraction = 0.0;
  int boundary_points = 0;
};

struct IterationRow {
  int iteration = 0;
  double beta = 0.0;
  double learning_rate = 0.0;
  double objective = 0.0;       // scaled mean compliance over the reference
  double loss = 0.0;            // objective plus augmented penalties
  double delta = 0.0;           // NaN when diversity is off
  std::array<double, kConstraintCount> violation{};
  std::array<double, kConstraintCount> lambda{};
  std::array<double, kConstraintCount> mu{};
  int skipped_points = 0;       // level-set points with a vanishing gradient
};

/// Deterministic training trace. Wall-clock timings are kept apart so two
/// runs with the same seed produce identical rows.
struct RunReport {
  double compliance_reference = 0.0;
  std::vector<IterationRow> iterations;
  std::vector<ShapeRow> shapes;
  std::vector<double> seconds;  // per iteration
};

struct TrainHooks {
  int threads = 1;
  /// Called every config.checkpoint_every iterations with the iteration count.
  std::function<void(int, const WireNet&)> checkpoint;
  /// Called after every iteration.
  std::function<void(const IterationRow&)> progress;
  /// Optional geometric constraints.
  const InterfaceSpec* interface = nullptr;
};

struct TrainResult {
  WireNet net;
  RunReport report;
  AlmState alm;
};

/// Trains a modulated field so that each modulation on the sampling circle
/// yields a low-compliance design at the target volume, with the pairwise
/// boundary diversity kept above delta_star.
TrainResult train(const ProblemSpec& spec, const RunConfig& config, const TrainHooks& hooks = {});

/// Projected physical densities H(f(centroids, z), beta) of one shape.
DensityGrid shape_density(const WireNet& net, const Eigen::Vector2d& z, const Grid2D& grid, double beta);

/// Projection sharpness used for the last training iteration.
double final_beta(const RunConfig& config);

/// Compliance of the uniform field at the target volume.
double reference_compliance(const ProblemSpec& spec, double penalty);

}  // namespace tom
