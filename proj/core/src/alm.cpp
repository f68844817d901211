#include "tom/alm.hpp"

#include <algorithm>
#include <stdexcept>

namespace tom {

AlmState::AlmState(int count, AlmParams p) : params(p) {
  if (count < 0) throw std::invalid_argument("AlmState: negative constraint count");
  if (p.mu0 <= 0 || p.growth < 1 || p.patience < 1 || p.decay < 0 || p.decay >= 1)
    throw std::invalid_argument("AlmState: invalid parameters");
  constraints.resize(static_cast<std::size_t>(count));
  for (auto& c : constraints) c.mu = p.mu0;
}

double AlmState::coefficient(int i, double violation) const {
  const auto& c = constraints.at(static_cast<std::size_t>(i));
  return c.lambda + c.mu * violation;
}

double AlmState::penalty(int i, double violation) const {
  const auto& c = constraints.at(static_cast<std::size_t>(i));
  return c.lambda * violation + 0.5 * c.mu * violation * violation;
}

AlmState alm_update(const AlmState& state, const std::vector<double>& violations) {
  if (violations.size() != state.constraints.size())
    throw std::invalid_argument("alm_update: violation count mismatch");
  AlmState next = state;
  const auto patience = static_cast<std::size_t>(state.params.patience);
  for (std::size_t i = 0; i < violations.size(); ++i) {
    auto& c = next.constraints[i];
    const double v = violations[i];
    if (v > 0) {
      c.lambda = std::max(0.0, c.lambda + c.mu * v);
    } else {
      c.lambda = std::max(0.0, c.lambda * (1.0 - state.params.decay));
    }
    c.history.push_back(v);
    if (c.history.size() > patience) {
      // Grow only when the window stayed violated and never dipped below its first value.
      const double old = c.history.front();
      c.history.pop_front();
      if (old > 0 && *std::min_element(c.history.begin(), c.history.end()) >= old) {
        c.mu *= state.params.growth;
        c.history.clear();
      }
    }
  }
  return next;
}

}  // namespace tom
