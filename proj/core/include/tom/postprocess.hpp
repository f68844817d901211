#pragma once

#include "tom/density.hpp"
#include "tom/problem.hpp"

#include <vector>

namespace tom {

/// 4-connected labels of a binary element mask (0 = empty, 1.. = component),
/// numbered in element order of first appearance.
std::vector<int> label_components(const Grid2D& grid, const std::vector<char>& mask, int* count = nullptr);

/// 3x3 closing: dilation treats outside pixels as empty, erosion treats
/// them as full, so the operation never removes material.
std::vector<char> close_3x3(const Grid2D& grid, const std::vector<char>& mask);

struct PostprocessResult {
  DensityGrid rho;
  int components = 0;          // 4-connected components in the output
  int removed_components = 0;  // floaters dropped from the binarized input
  bool empty = false;          // no component touched a support or a load
};

/// Floater removal and closing: binarize at tau, keep 4-connected
/// components touching a support or load node, close with a 3x3 element,
/// and repeat until the mask stops changing. Output values are
/// kDensityFloor or 1.
PostprocessResult postprocess_a(const DensityGrid& rho, const ProblemSpec& spec, double tau = 0.5);

}  // namespace tom
