#pragma once

#include "tom/grid.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <span>

namespace tom {

/// One density per element, element order, each value finite and in [0, 1].
///
/// Out-of-range input is rejected rather than clamped; the ersatz floor is
/// the FEM's concern, not this type's.
class DensityGrid {
public:
  DensityGrid(Grid2D grid, Eigen::VectorXd values);
  static DensityGrid uniform(const Grid2D& grid, double value);

  const Grid2D& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](Eigen::Index e) const { return values_(e); }
  Eigen::Index size() const { return values_.size(); }

  /// Integral of the density over the domain.
  double volume() const { return values_.sum() * grid_.element_area(); }
  /// Volume as a fraction of the domain.
  double volume_fraction() const { return values_.mean(); }

private:
  Grid2D grid_;
  Eigen::VectorXd values_;
};

/// Plain-text density file: a header line "nx ny lx ly" followed by ny rows
/// of nx values, bottom row first (element order).
void write_density(const std::filesystem::path& path, const DensityGrid& rho);
DensityGrid read_density(const std::filesystem::path& path);

/// 8-bit binary graymap (P5), dark = material, top row of the domain first.
void write_pgm(const std::filesystem::path& path, const DensityGrid& rho);

}  // namespace tom
