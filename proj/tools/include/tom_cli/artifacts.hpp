#pragma once

#include <tom/boundary.hpp>
#include <tom/density.hpp>
#include <tom/metrics.hpp>
#include <tom/problem.hpp>
#include <tom/simp.hpp>
#include <tom/trainer.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace tom::cli {

/// Batch statistics written to summary.json. Everything here is a pure
/// function of the inputs; wall-clock time lives in timing.json.
struct Summary {
  std::string problem;
  int shapes = 0;
  double c_mean = 0, c_std = 0, c_min = 0, c_max = 0;
  double v_mean = 0, v_std = 0, v_min = 0, v_max = 0;
  double lvr = 0;      // any-load-point reading
  double lvr_all = 0;  // all-load-points reading
  double ew1 = 0;
  double delta = 0;
};

struct BatchEvaluation {
  std::vector<MetricsRow> rows;
  Eigen::MatrixXd w1;
  Summary summary;
};

/// Compliance, volume and load violation per shape, shared-direction sliced
/// W1 matrix, its expectation and the boundary diversity.
BatchEvaluation evaluate_batch(const std::vector<DensityGrid>& shapes, const std::vector<BoundaryCloud>& clouds,
                               const ProblemSpec& spec, double penalty, std::uint64_t seed, int threads);

/// Boundary cloud of a density grid, from bilinear interpolation of the
/// element values through node averages.
BoundaryCloud density_boundary(const DensityGrid& rho, int steps = 10);

inline constexpr int kW1Projections = 256;

void write_summary(const std::filesystem::path& path, const Summary& s);
Summary read_summary(const std::filesystem::path& path);
void write_timing(const std::filesystem::path& path, double seconds);
/// One row per shape followed by a "mean" row.
void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);
void write_report_csv(const std::filesystem::path& path, const RunReport& report);
void write_simp_report_csv(const std::filesystem::path& path, const SimpResult& result);
/// "tom <version>", seed, thread count and the exact command line.
void write_stamp(const std::filesystem::path& path, std::uint64_t seed, int threads, const std::string& command);
void write_text(const std::filesystem::path& path, const std::string& text);

std::string version();

}  // namespace tom::cli
