#include "tom/filters.hpp"

#include <cmath>
#include <stdexcept>

namespace tom {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("heaviside: beta must be positive");
}

}  // namespace

double heaviside(double x, double beta) {
  check_beta(beta);
  return 0.5 + std::tanh(beta * (x - 0.5)) / (2.0 * std::tanh(0.5 * beta));
}

double heaviside_grad(double x, double beta) {
  check_beta(beta);
  const double ch = std::cosh(beta * (x - 0.5));
  return beta / (ch * ch * 2.0 * std::tanh(0.5 * beta));
}

double heaviside_inverse(double y, double beta) {
  check_beta(beta);
  if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("heaviside_inverse: y outside [0, 1]");
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (heaviside(mid, beta) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd heaviside(const Eigen::VectorXd& x, double beta) {
  check_beta(beta);
  const double denom = 2.0 * std::tanh(0.5 * beta);
  return x.unaryExpr([&](double v) { return 0.5 + std::tanh(beta * (v - 0.5)) / denom; });
}

Eigen::VectorXd heaviside_grad(const Eigen::VectorXd& x, double beta) {
  check_beta(beta);
  const double denom = 2.0 * std::tanh(0.5 * beta);
  return x.unaryExpr([&](double v) {
    const double ch = std::cosh(beta * (v - 0.5));
    return beta / (ch * ch * denom);
  });
}

void AnnealSchedule::validate() const {
  if (!(beta0 > 0.0) || !(beta_max >= beta0)) {
    throw std::invalid_argument("AnnealSchedule: need 0 < beta0 <= beta_max");
  }
  if (t1 < t0) throw std::invalid_argument("AnnealSchedule: window end before start");
}

double AnnealSchedule::growth() const {
  if (t1 == t0) return 1.0;
  return std::pow(beta_max / beta0, 1.0 / (t1 - t0));
}

double AnnealSchedule::beta(int t) const {
  if (t <= t0) return beta0;
  if (t >= t1) return beta_max;
  return beta0 * std::pow(beta_max / beta0, static_cast<double>(t - t0) / (t1 - t0));
}

VolumeLoss volume_loss(const DensityGrid& rho, double volume_target) {
  const auto& g = rho.grid();
  const double fraction = rho.volume() / g.domain_area();
  const double violation = std::max(0.0, fraction - volume_target);
  const double slope = violation > 0.0 ? g.element_area() / g.domain_area() : 0.0;
  return {violation, Eigen::VectorXd::Constant(rho.size(), slope)};
}

VolumeLoss volume_loss_equality(const DensityGrid& rho, double volume_target) {
  const auto& g = rho.grid();
  const double diff = rho.volume() / g.domain_area() - volume_target;
  const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
  return {std::abs(diff), Eigen::VectorXd::Constant(rho.size(), sign * g.element_area() / g.domain_area())};
}

}  // namespace tom
