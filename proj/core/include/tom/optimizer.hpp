#pragma once

#include <Eigen/Core>

namespace tom {

/// Learning rate base * 2^(-t / decay); decay <= 0 keeps it constant.
double lr_schedule(int t, double base, double decay);

/// Adam with bias correction.
class Adam {
public:
  explicit Adam(Eigen::Index size, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, double lr);
  int steps() const { return t_; }

private:
  Eigen::VectorXd m_, v_;
  double beta1_, beta2_, eps_;
  int t_ = 0;
};

}  // namespace tom
