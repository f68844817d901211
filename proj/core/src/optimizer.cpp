#include "tom/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace tom {

double lr_schedule(int t, double base, double decay) {
  if (decay <= 0) return base;
  return base * std::exp2(-static_cast<double>(t) / decay);
}

Adam::Adam(Eigen::Index size, double beta1, double beta2, double eps)
    : m_(Eigen::VectorXd::Zero(size)), v_(Eigen::VectorXd::Zero(size)), beta1_(beta1), beta2_(beta2), eps_(eps) {
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && eps > 0))
    throw std::invalid_argument("Adam: invalid hyperparameters");
}

void Adam::step(Eigen::VectorXd& theta, const Eigen::VectorXd& grad, double lr) {
  if (theta.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("Adam::step: size mismatch");
  ++t_;
  m_ = beta1_ * m_ + (1 - beta1_) * grad;
  v_ = beta2_ * v_ + (1 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1 - std::pow(beta1_, t_);
  const double c2 = 1 - std::pow(beta2_, t_);
  theta.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

}  // namespace tom
