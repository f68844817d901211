#pragma once

#include "tom/wire_net.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <optional>

namespace tom {

/// Interface points with optional prescribed outward normals, a design
/// region predicate and an exclusion radius for boundary sampling.
struct InterfaceSpec {
  Eigen::Matrix2Xd points;
  std::optional<Eigen::Matrix2Xd> normals;
  std::function<bool(const Eigen::Vector2d&)> in_design_region;
  double epsilon = 0.0;

  void validate() const;
};

/// Point list, one point per line: "x y" or "x y nx ny". Blank lines and
/// lines starting with '#' are skipped. Normals must be present on every
/// line or on none, and are normalized to unit length on load.
InterfaceSpec read_interface(const std::filesystem::path& path);

/// A Monte Carlo constraint estimate and dL/df at each sample point.
struct PointLoss {
  double value = 0.0;
  Eigen::VectorXd upstream;
};

/// mean over points outside the design region of max(0, f - level)^2.
PointLoss design_region_loss(const WireNet& net, const Eigen::Vector2d& z, const Eigen::Matrix2Xd& points,
                             double level = 0.5);
/// mean over interface points of (f - level)^2.
PointLoss interface_loss(const WireNet& net, const Eigen::Vector2d& z, const InterfaceSpec& interface,
                         double level = 0.5);

/// Same losses from precomputed field values; used by tests and by callers
/// that already evaluated the field.
PointLoss design_region_loss(const Eigen::VectorXd& field, double level = 0.5);
PointLoss interface_loss(const Eigen::VectorXd& field, double level = 0.5);

struct NormalLoss {
  double value = 0.0;
  /// dL / d(grad_x f) per point; zero columns at skipped points.
  Eigen::Matrix2Xd upstream;
  int skipped = 0;
  double skipped_fraction = 0.0;
};

/// Mean of |grad f / |grad f| - n|^2 over interface points whose gradient
/// norm is at least 1e-12; degenerate points are skipped and counted.
NormalLoss normal_loss(const WireNet& net, const Eigen::Vector2d& z, const InterfaceSpec& interface);
NormalLoss normal_loss(const Eigen::Matrix2Xd& field_grad, const Eigen::Matrix2Xd& normals);

}  // namespace tom
