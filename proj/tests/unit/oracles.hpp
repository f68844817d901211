#pragma once

// Independent reference implementations used only by the tests.

#include <tom/problem.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

/// Plane-stress Q4 stiffness by 2x2 Gauss quadrature, written out from the
/// textbook B-matrix; unit modulus.
inline Eigen::Matrix<double, 8, 8> q4_stiffness(double nu, double hx, double hy) {
  Eigen::Matrix3d D;
  D << 1, nu, 0, nu, 1, 0, 0, 0, (1 - nu) / 2;
  D /= 1 - nu * nu;
  const double xi_n[4] = {-1, 1, 1, -1};
  const double eta_n[4] = {-1, -1, 1, 1};
  const double g = 1.0 / std::sqrt(3.0);
  Eigen::Matrix<double, 8, 8> K = Eigen::Matrix<double, 8, 8>::Zero();
  for (double xi : {-g, g})
    for (double eta : {-g, g}) {
      Eigen::Matrix<double, 3, 8> B = Eigen::Matrix<double, 3, 8>::Zero();
      for (int a = 0; a < 4; ++a) {
        const double dNdxi = 0.25 * xi_n[a] * (1 + eta * eta_n[a]);
        const double dNdeta = 0.25 * eta_n[a] * (1 + xi * xi_n[a]);
        const double dx = dNdxi * 2 / hx, dy = dNdeta * 2 / hy;
        B(0, 2 * a) = dx;
        B(1, 2 * a + 1) = dy;
        B(2, 2 * a) = dy;
        B(2, 2 * a + 1) = dx;
      }
      K += B.transpose() * D * B * (hx * hy / 4);
    }
  return K;
}

struct DenseSolve {
  Eigen::VectorXd u;
  double compliance;
};

/// Full dense assembly, elimination of fixed dofs and an LDLT solve.
inline DenseSolve dense_solve(const tom::ProblemSpec& spec, const Eigen::VectorXd& rho, double p) {
  const auto& g = spec.grid;
  const int ndof = 2 * static_cast<int>(g.node_count());
  const auto ke = q4_stiffness(spec.poisson_ratio, g.hx(), g.hy());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ndof, ndof);
  for (int e = 0; e < static_cast<int>(g.element_count()); ++e) {
    const double s = spec.youngs_modulus * (1e-6 + (1 - 1e-6) * std::pow(rho(e), p));
    const auto nodes = g.element_nodes(e);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) K(2 * nodes[a / 2] + a % 2, 2 * nodes[b / 2] + b % 2) += s * ke(a, b);
  }
  std::vector<bool> fixed(static_cast<std::size_t>(ndof), false);
  for (const auto& f : spec.fixed_dofs) fixed[static_cast<std::size_t>(f.dof())] = true;
  std::vector<int> freed;
  for (int d = 0; d < ndof; ++d)
    if (!fixed[static_cast<std::size_t>(d)]) freed.push_back(d);
  const int n = static_cast<int>(freed.size());
  Eigen::MatrixXd Kf(n, n);
  Eigen::VectorXd ff(n);
  const Eigen::VectorXd f = spec.load_vector();
  for (int i = 0; i < n; ++i) {
    ff(i) = f(freed[i]);
    for (int j = 0; j < n; ++j) Kf(i, j) = K(freed[i], freed[j]);
  }
  const Eigen::VectorXd uf = Kf.ldlt().solve(ff);
  DenseSolve out{Eigen::VectorXd::Zero(ndof), 0.0};
  for (int i = 0; i < n; ++i) out.u(freed[i]) = uf(i);
  out.compliance = f.dot(out.u);
  return out;
}

/// Central difference of a scalar function of one coordinate.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline double relative_error(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// WIRE field evaluated in complex arithmetic straight from the parameter
/// layout: per layer W_cos, b_cos, W_gauss, b_gauss (column-major), then the
/// head weights and bias.
inline std::complex<double> wire_forward_complex(const Eigen::VectorXd& theta, const std::vector<int>& widths,
                                                 double omega0, double s0, const std::array<std::complex<double>, 4>& in) {
  using C = std::complex<double>;
  std::vector<C> v(in.begin(), in.end());
  Eigen::Index o = 0;
  for (int w : widths) {
    const auto fan_in = static_cast<Eigen::Index>(v.size());
    const Eigen::Index wc = o, bc = wc + w * fan_in, wg = bc + w, bg = wg + w * fan_in;
    o = bg + w;
    std::vector<C> next(static_cast<std::size_t>(w));
    for (Eigen::Index r = 0; r < w; ++r) {
      C p = theta(bc + r), q = theta(bg + r);
      for (Eigen::Index c = 0; c < fan_in; ++c) {
        p += theta(wc + c * w + r) * v[static_cast<std::size_t>(c)];
        q += theta(wg + c * w + r) * v[static_cast<std::size_t>(c)];
      }
      next[static_cast<std::size_t>(r)] = std::cos(omega0 * p) * std::exp(-(s0 * q) * (s0 * q));
    }
    v = std::move(next);
  }
  C y = theta(o + static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) y += theta(o + static_cast<Eigen::Index>(k)) * v[k];
  return 1.0 / (1.0 + std::exp(-y));
}

/// Complex-step derivative of the field along input coordinate d (0, 1 spatial).
inline double wire_complex_step(const Eigen::VectorXd& theta, const std::vector<int>& widths, double omega0, double s0,
                                const Eigen::Vector2d& x, const Eigen::Vector2d& z, int d) {
  constexpr double h = 1e-30;
  std::array<std::complex<double>, 4> in{x(0), x(1), z(0), z(1)};
  in[static_cast<std::size_t>(d)] += std::complex<double>(0.0, h);
  return std::imag(wire_forward_complex(theta, widths, omega0, s0, in)) / h;
}

}  // namespace oracle
