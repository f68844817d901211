#pragma once

#include "tom/density.hpp"

#include <Eigen/Core>

namespace tom {

/// Smooth Heaviside projection 0.5 + tanh(beta (x - 0.5)) / (2 tanh(beta / 2)).
/// Maps [0, 1] onto itself bijectively with H(0) = 0, H(0.5) = 0.5, H(1) = 1.
double heaviside(double x, double beta);
double heaviside_grad(double x, double beta);
/// Inverse of heaviside on [0, 1] by bisection.
double heaviside_inverse(double y, double beta);

Eigen::VectorXd heaviside(const Eigen::VectorXd& x, double beta);
Eigen::VectorXd heaviside_grad(const Eigen::VectorXd& x, double beta);

/// Geometric ramp of the projection sharpness: beta0 up to t0, beta_max
/// from t1 on, and beta0 * growth^(t - t0) in between, with the growth
/// factor chosen to hit beta_max exactly at t1. Evaluated in closed form.
struct AnnealSchedule {
  double beta0 = 2.0;
  double beta_max = 64.0;
  int t0 = 0;
  int t1 = 400;

  void validate() const;
  double growth() const;
  double beta(int t) const;
};

struct VolumeLoss {
  double violation;
  Eigen::VectorXd grad;
};

/// One-sided hinge max(0, V / V_domain - V*) and its per-element gradient.
VolumeLoss volume_loss(const DensityGrid& rho, double volume_target);

/// Two-sided |V / V_domain - V*|, used when the volume is treated as an
/// equality constraint. The gradient at the kink is zero.
VolumeLoss volume_loss_equality(const DensityGrid& rho, double volume_target);

}  // namespace tom
