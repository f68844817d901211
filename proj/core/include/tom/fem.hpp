#pragma once

#include "tom/density.hpp"
#include "tom/problem.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace tom {

class FemError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using ElementMatrix = Eigen::Matrix<double, 8, 8>;

/// Bilinear quad stiffness for unit Young's modulus under plane stress.
/// Dof order: (u_x, u_y) per corner, corners counter-clockwise from the
/// lower-left.
ElementMatrix element_stiffness(double poisson_ratio, double hx, double hy);

/// Modified SIMP interpolation floor + (1 - floor) rho^p and its derivative.
double simp_modulus(double rho, double penalty);
double simp_modulus_derivative(double rho, double penalty);

struct FemSolution {
  Eigen::VectorXd u;
  double compliance = 0.0;
  Eigen::VectorXd dc_drho;
  double volume = 0.0;
  Eigen::VectorXd dv_drho;
};

/// Reusable solver for one problem: holds the element matrix, the reduced
/// dof numbering and the sparsity pattern, so each solve only refills matrix
/// values and factorizes. solve() is const and safe to call concurrently.
class FemSolver {
public:
  explicit FemSolver(ProblemSpec spec);

  const ProblemSpec& spec() const { return spec_; }
  const ElementMatrix& ke() const { return ke_; }
  Eigen::Index free_dof_count() const { return static_cast<Eigen::Index>(free_to_full_.size()); }

  /// Solves K(rho) u = f with fixed dofs eliminated. Throws FemError when the
  /// reduced system is singular, std::invalid_argument on bad input.
  FemSolution solve(const DensityGrid& rho, double penalty) const;

  /// Global stiffness with fixed dofs eliminated (free dofs only).
  Eigen::SparseMatrix<double> reduced_stiffness(const DensityGrid& rho, double penalty) const;

  /// u_e^T ke u_e per element for a full displacement vector.
  Eigen::VectorXd element_energies(const Eigen::VectorXd& u) const;

private:
  void check_input(const DensityGrid& rho, double penalty) const;
  Eigen::VectorXd assemble_values(const DensityGrid& rho, double penalty) const;

  ProblemSpec spec_;
  ElementMatrix ke_;
  std::vector<int> full_to_free_;
  std::vector<int> free_to_full_;
  std::vector<std::array<int, 8>> element_dofs_;
  Eigen::SparseMatrix<double> pattern_;
  // Per element, slot in pattern_.valuePtr() for each (a, b) pair in the
  // lower triangle, -1 when either dof is fixed or the pair is above the
  // diagonal.
  std::vector<std::array<int, 64>> slots_;
  Eigen::VectorXd free_load_;
};

/// Convenience wrapper constructing a solver for a single call.
FemSolution assemble_and_solve(const ProblemSpec& spec, const DensityGrid& rho, double penalty);

struct DerivativeCheck {
  double analytic;
  double numeric;
  double relative_error() const;
};

/// Analytic dC/drho_e against a central difference of full solves.
DerivativeCheck stiffness_derivative_check(const ProblemSpec& spec, const DensityGrid& rho, double penalty,
                                           int element, double step);

}  // namespace tom
