#include "tom/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tom {

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Eigen::Vector2d> sample_modulations(Rng& rng, int count, double radius, ModulationMode mode) {
  if (count < 1) throw std::invalid_argument("sample_modulations: count must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("sample_modulations: radius must be positive");
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double angle = mode == ModulationMode::CircleFixed ? 2.0 * std::numbers::pi * k / count
                                                             : 2.0 * std::numbers::pi * uniform01(rng);
    out.emplace_back(radius * std::cos(angle), radius * std::sin(angle));
  }
  return out;
}

}  // namespace tom
