#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <vector>

namespace tom {

/// Single-owner generator; pass it explicitly to every stochastic call.
using Rng = std::mt19937_64;

enum class ModulationMode { CircleUniform, CircleFixed };

/// M modulation vectors on the circle of radius r. Uniform mode draws
/// i.i.d. angles in [0, 2 pi); fixed mode returns M equally spaced angles
/// starting at 0 and leaves the generator untouched.
std::vector<Eigen::Vector2d> sample_modulations(Rng& rng, int count, double radius, ModulationMode mode);

/// Uniform double in [0, 1) built from the raw 64-bit output so results do
/// not depend on the standard library's distribution implementation.
double uniform01(Rng& rng);

}  // namespace tom
