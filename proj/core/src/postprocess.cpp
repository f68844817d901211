#include "tom/postprocess.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tom {

std::vector<int> label_components(const Grid2D& grid, const std::vector<char>& mask, int* count) {
  const int nx = grid.nx(), ny = grid.ny();
  if (mask.size() != grid.element_count()) throw std::invalid_argument("label_components: mask size mismatch");
  std::vector<int> label(mask.size(), 0);
  std::vector<int> stack;
  int next = 0;
  for (int start = 0; start < static_cast<int>(mask.size()); ++start) {
    if (!mask[static_cast<std::size_t>(start)] || label[static_cast<std::size_t>(start)]) continue;
    ++next;
    label[static_cast<std::size_t>(start)] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const int e = stack.back();
      stack.pop_back();
      const auto [i, j] = grid.element_ij(e);
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& [a, b] : nb) {
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const auto f = static_cast<std::size_t>(grid.element(a, b));
        if (mask[f] && !label[f]) {
          label[f] = next;
          stack.push_back(static_cast<int>(f));
        }
      }
    }
  }
  if (count) *count = next;
  return label;
}

std::vector<char> close_3x3(const Grid2D& grid, const std::vector<char>& mask) {
  const int nx = grid.nx(), ny = grid.ny();
  auto at = [&](const std::vector<char>& m, int i, int j, char outside) {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return outside;
    return m[static_cast<std::size_t>(grid.element(i, j))];
  };
  std::vector<char> dil(mask.size(), 0), out(mask.size(), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      char v = 0;
      for (int dj = -1; dj <= 1 && !v; ++dj)
        for (int di = -1; di <= 1 && !v; ++di) v = at(mask, i + di, j + dj, 0);
      dil[static_cast<std::size_t>(grid.element(i, j))] = v;
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      char v = 1;
      for (int dj = -1; dj <= 1 && v; ++dj)
        for (int di = -1; di <= 1 && v; ++di) v = at(dil, i + di, j + dj, 1);
      out[static_cast<std::size_t>(grid.element(i, j))] = v;
    }
  return out;
}

namespace {

std::vector<char> keep_anchored(const Grid2D& grid, const std::vector<char>& mask, const std::set<int>& anchors,
                                int* removed) {
  int count = 0;
  const auto label = label_components(grid, mask, &count);
  std::vector<char> keep_label(static_cast<std::size_t>(count) + 1, 0);
  for (int e = 0; e < static_cast<int>(mask.size()); ++e) {
    const int l = label[static_cast<std::size_t>(e)];
    if (!l || keep_label[static_cast<std::size_t>(l)]) continue;
    for (int n : grid.element_nodes(e))
      if (anchors.contains(n)) {
        keep_label[static_cast<std::size_t>(l)] = 1;
        break;
      }
  }
  if (removed) *removed = count - static_cast<int>(std::count(keep_label.begin(), keep_label.end(), 1));
  std::vector<char> out(mask.size(), 0);
  for (std::size_t e = 0; e < mask.size(); ++e) out[e] = keep_label[static_cast<std::size_t>(label[e])];
  return out;
}

}  // namespace

PostprocessResult postprocess_a(const DensityGrid& rho, const ProblemSpec& spec, double tau) {
  const Grid2D& grid = spec.grid;
  if (!(rho.grid() == grid)) throw std::invalid_argument("postprocess_a: density grid does not match the problem");
  std::set<int> anchors;
  for (int n : spec.support_nodes()) anchors.insert(n);
  for (int n : spec.load_nodes()) anchors.insert(n);

  std::vector<char> mask(grid.element_count());
  for (std::size_t e = 0; e < mask.size(); ++e) mask[e] = rho[static_cast<Eigen::Index>(e)] > tau ? 1 : 0;

  int removed = 0;
  mask = keep_anchored(grid, mask, anchors, &removed);
  for (int pass = 0; pass < 16; ++pass) {
    auto next = keep_anchored(grid, close_3x3(grid, mask), anchors, nullptr);
    if (next == mask) break;
    mask = std::move(next);
  }

  PostprocessResult result{DensityGrid::uniform(grid, kDensityFloor), 0, removed, false};
  Eigen::VectorXd values(static_cast<Eigen::Index>(mask.size()));
  for (std::size_t e = 0; e < mask.size(); ++e) values(static_cast<Eigen::Index>(e)) = mask[e] ? 1.0 : kDensityFloor;
  result.rho = DensityGrid(grid, values);
  label_components(grid, mask, &result.components);
  result.empty = result.components == 0;
  return result;
}

}  // namespace tom
