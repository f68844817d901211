#pragma once

#include "tom/density.hpp"
#include "tom/fem.hpp"
#include "tom/filters.hpp"
#include "tom/problem.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <vector>

namespace tom {

/// Conic (linear hat) density filter with mirrored boundaries. On a regular
/// grid the mirrored kernel yields a symmetric, doubly stochastic matrix, so
/// filtering preserves both constants and total volume.
class DensityFilter {
public:
  DensityFilter(const Grid2D& grid, double radius);

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return weights_ * x; }
  /// Chain rule through the filter (the matrix is symmetric, so this is the
  /// same product, kept separate for readability at call sites).
  Eigen::VectorXd backprop(const Eigen::VectorXd& g) const { return weights_.transpose() * g; }
  const Eigen::SparseMatrix<double>& weights() const { return weights_; }

private:
  Eigen::SparseMatrix<double> weights_;
};

struct SimpOptions {
  double penalty = 3.0;
  int iterations = 400;
  double move_limit = 0.2;
  AnnealSchedule beta{.beta0 = 1.0, .beta_max = 16.0, .t0 = 0, .t1 = 300};
  /// Physical filter radius; non-positive means 1.5 element widths.
  double filter_radius = 0.0;
  double volume_tolerance = 1e-6;
};

struct SimpResult {
  DensityGrid design;              // projected physical densities
  Eigen::VectorXd design_variables;
  std::vector<double> compliance{};  // per iteration, before the update
  std::vector<double> volume_fraction{};
  double final_compliance = 0.0;
  int bisection_failures = 0;
};

/// Optimality-criteria SIMP with density filtering and Heaviside projection.
/// The volume multiplier is found by bisection so that the filtered and
/// projected design meets the target volume. `initial` (design variables)
/// defaults to the uniform field whose projection equals the target volume;
/// iteration numbering, and hence the projection schedule, starts at
/// `start_iteration`.
SimpResult optimize_simp(const ProblemSpec& spec, const SimpOptions& options,
                         const std::optional<Eigen::VectorXd>& initial = std::nullopt, int start_iteration = 0);

/// Short classical refinement of an existing design: runs `fraction` of a
/// full run from the final part of the projection schedule with the move
/// limit scaled by `lr_scale`. fraction = 0 returns the input unchanged.
SimpResult finetune(const DensityGrid& initial, const ProblemSpec& spec, double fraction = 0.05,
                    double lr_scale = 0.1, const SimpOptions& base = {});

}  // namespace tom
