#pragma once

#include <deque>
#include <vector>

namespace tom {

/// Multiplier and penalty for one inequality constraint c >= 0 (c = 0 means
/// satisfied).
struct AlmConstraint {
  double lambda = 0.0;
  double mu = 1.0;
  std::deque<double> history;  // violations since the last penalty growth
};

struct AlmParams {
  double mu0 = 1.0;
  double growth = 1.5;
  int patience = 10;
  double decay = 0.05;
};

struct AlmState {
  AlmParams params;
  std::vector<AlmConstraint> constraints;

  AlmState() = default;
  AlmState(int count, AlmParams p);

  /// Gradient weight lambda + mu * c applied to dc/dtheta.
  double coefficient(int i, double violation) const;
  /// Augmented penalty lambda c + mu c^2 / 2.
  double penalty(int i, double violation) const;
};

/// lambda <- max(0, lambda + mu c) while violated, and decays by
/// (1 - decay) once satisfied. mu grows by `growth` when the violation is
/// positive throughout the last `patience` + 1 updates and never fell below the
/// value at the start of that window; the window restarts after each growth.
AlmState alm_update(const AlmState& state, const std::vector<double>& violations);

}  // namespace tom
