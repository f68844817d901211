#include <tom/boundary.hpp>
#include <tom/chamfer.hpp>
#include <tom/fem.hpp>
#include <tom/wire_net.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace tom;

namespace {

void BM_FemSolve(benchmark::State& state) {
  const int nx = static_cast<int>(state.range(0));
  const auto spec = make_mbb_problem(nx, nx / 3);
  const FemSolver solver(spec);
  const auto rho = DensityGrid::uniform(spec.grid, spec.volume_target);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(rho, 3.0).compliance);
  state.SetLabel(std::to_string(nx) + "x" + std::to_string(nx / 3));
}
BENCHMARK(BM_FemSolve)->Arg(30)->Arg(90)->Arg(180)->Unit(benchmark::kMillisecond);

WireNet paper_net() {
  Rng rng(1);
  return WireNet::initialized({32, 32, 32}, 10.0, 10.0, rng);
}

void BM_NetForward(benchmark::State& state) {
  const auto net = paper_net();
  const Grid2D grid(90, 30, 3.0, 1.0);
  const auto x = grid.centroids();
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x, Eigen::Vector2d(1.2, 0.0)));
}
BENCHMARK(BM_NetForward)->Unit(benchmark::kMicrosecond);

void BM_NetBackward(benchmark::State& state) {
  const auto net = paper_net();
  const Grid2D grid(90, 30, 3.0, 1.0);
  const auto x = grid.centroids();
  const Eigen::Matrix2Xd z = Eigen::Vector2d(1.2, 0.0).replicate(1, x.cols());
  const Eigen::VectorXd up = Eigen::VectorXd::Ones(x.cols());
  Eigen::VectorXd grad(net.parameter_count());
  for (auto _ : state) {
    GradTape tape;
    net.forward(x, z, tape);
    grad.setZero();
    net.backward_params(tape, up, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_NetBackward)->Unit(benchmark::kMicrosecond);

void BM_Chamfer(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 r(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Matrix2Xd a(2, n), b(2, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a.col(k) << 3 * u(r), u(r);
    b.col(k) << 3 * u(r), u(r);
  }
  for (auto _ : state) benchmark::DoNotOptimize(chamfer(a, b));
}
BENCHMARK(BM_Chamfer)->Arg(128)->Arg(512)->Unit(benchmark::kMicrosecond);

void BM_BoundaryExtraction(benchmark::State& state) {
  const auto net = paper_net();
  const Grid2D grid(90, 30, 3.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(extract_boundary(net, {1.2, 0.0}, grid).size());
}
BENCHMARK(BM_BoundaryExtraction)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
