#pragma once

#include "tom/random.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace tom {

class WireNet;

/// Activations recorded by a forward pass, consumed by backward_params.
struct GradTape {
  const WireNet* net = nullptr;
  Eigen::Index batch = 0;
  std::vector<Eigen::MatrixXd> inputs;  // per layer input, in x batch
  std::vector<Eigen::MatrixXd> pre_cos;
  std::vector<Eigen::MatrixXd> pre_gauss;
  std::vector<Eigen::MatrixXd> act_cos;
  std::vector<Eigen::MatrixXd> act_gauss;
  Eigen::MatrixXd last;  // output of the final hidden layer
  Eigen::VectorXd output;
};

/// Value and spatial gradient of the field at a batch of points.
struct FieldGradient {
  Eigen::VectorXd value;
  Eigen::Matrix2Xd grad;  // d f / d x, d f / d y per column
};

/// Real WIRE field f(x, z): each hidden layer applies two affine maps to
/// the same input and multiplies cos(omega0 p) by exp(-(s0 q)^2); a linear
/// head followed by a logistic sigmoid yields a density in (0, 1). The
/// input is the concatenation [x; z] with two spatial and two modulation
/// coordinates.
class WireNet {
public:
  static constexpr int kSpatialDim = 2;
  static constexpr int kModulationDim = 2;
  static constexpr int kInputDim = kSpatialDim + kModulationDim;

  /// All parameters zero.
  WireNet(std::vector<int> widths, double omega0, double s0);

  /// First layer uniform in +-1/input_dim, deeper layers and the head in
  /// +-sqrt(6/fan_in)/omega0; biases use the same range as their weights,
  /// except the head bias which starts at zero.
  static WireNet initialized(std::vector<int> widths, double omega0, double s0, Rng& rng, std::uint64_t seed = 0);

  const std::vector<int>& widths() const { return widths_; }
  double omega0() const { return omega0_; }
  double s0() const { return s0_; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  Eigen::VectorXd& theta() { return theta_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  Eigen::Index parameter_count() const { return theta_.size(); }

  Eigen::VectorXd forward(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods) const;
  Eigen::VectorXd forward(const Eigen::Matrix2Xd& points, const Eigen::Vector2d& z) const;
  Eigen::VectorXd forward(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods, GradTape& tape) const;

  /// Accumulates d(sum_b upstream_b f_b)/d theta into `grad`.
  void backward_params(const GradTape& tape, const Eigen::VectorXd& upstream, Eigen::VectorXd& grad) const;

  /// Forward-mode derivative with respect to the two spatial inputs.
  FieldGradient spatial_gradient(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods) const;
  FieldGradient spatial_gradient(const Eigen::Matrix2Xd& points, const Eigen::Vector2d& z) const;
  Eigen::Vector2d spatial_gradient(const Eigen::Vector2d& x, const Eigen::Vector2d& z) const;

  /// Accumulates the parameter gradient of
  ///   sum_b value_upstream_b f_b + grad_upstream_b . grad_x f_b,
  /// i.e. reverse mode through the forward-mode spatial derivative.
  void backward_spatial(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods,
                        const Eigen::VectorXd& value_upstream, const Eigen::Matrix2Xd& grad_upstream,
                        Eigen::VectorXd& grad) const;

  friend bool operator==(const WireNet& a, const WireNet& b) {
    return a.widths_ == b.widths_ && a.omega0_ == b.omega0_ && a.s0_ == b.s0_ && a.theta_ == b.theta_;
  }

private:
  struct LayerView {
    Eigen::Index fan_in;
    Eigen::Index width;
    Eigen::Index w_cos;
    Eigen::Index b_cos;
    Eigen::Index w_gauss;
    Eigen::Index b_gauss;
  };

  Eigen::MatrixXd stack_inputs(const Eigen::Matrix2Xd& points, const Eigen::Matrix2Xd& mods) const;
  Eigen::Map<const Eigen::MatrixXd> mat(Eigen::Index offset, Eigen::Index rows, Eigen::Index cols) const;
  Eigen::Map<const Eigen::VectorXd> vec(Eigen::Index offset, Eigen::Index size) const;

  std::vector<int> widths_;
  double omega0_;
  double s0_;
  std::uint64_t seed_ = 0;
  std::vector<LayerView> layers_;
  Eigen::Index head_w_ = 0;
  Eigen::Index head_b_ = 0;
  Eigen::VectorXd theta_;
};

/// Text checkpoint:
///   tom-wire-net 1
///   widths <w1> <w2> ...
///   omega0 <v>
///   s0 <v>
///   seed <n>
///   params <count>
///   <one parameter per line, 17 significant digits>
void write_checkpoint(const std::filesystem::path& path, const WireNet& net);
WireNet read_checkpoint(const std::filesystem::path& path);

}  // namespace tom
