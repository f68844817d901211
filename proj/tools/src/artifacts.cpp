#include "tom_cli/artifacts.hpp"

#include <tom/diversity.hpp>
#include <tom/fem.hpp>
#include <tom/filters.hpp>
#include <tom/parallel.hpp>

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tom::cli {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

struct Stats {
  double mean = 0, std = 0, min = 0, max = 0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (double x : v) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(v.size()));
  return s;
}

}  // namespace

std::string version() { return TOM_VERSION; }

BatchEvaluation evaluate_batch(const std::vector<DensityGrid>& shapes, const std::vector<BoundaryCloud>& clouds,
                               const ProblemSpec& spec, double penalty, std::uint64_t seed, int threads) {
  if (shapes.empty()) throw std::invalid_argument("evaluate_batch: no shapes");
  const FemSolver solver(spec);
  BatchEvaluation ev;
  ev.rows.resize(shapes.size());
  std::vector<double> C(shapes.size()), V(shapes.size());
  parallel_for(shapes.size(), threads, [&](std::size_t j) {
    const auto sol = solver.solve(shapes[j], penalty);
    C[j] = sol.compliance;
    V[j] = shapes[j].volume_fraction();
  });

  bool all_massive = true;
  for (const auto& s : shapes) all_massive = all_massive && s.values().sum() > 0;
  if (all_massive) {
    Rng rng(seed ^ 0x5eed0001ull);
    ev.w1 = sliced_w1_matrix(shapes, random_directions(kW1Projections, rng), {}, threads);
  } else {
    ev.w1 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(shapes.size()), static_cast<Eigen::Index>(shapes.size()));
  }

  for (std::size_t j = 0; j < shapes.size(); ++j) {
    auto& r = ev.rows[j];
    r.shape = static_cast<int>(j);
    r.compliance = C[j];
    r.volume_fraction = V[j];
    r.load_violation = load_violation(shapes[j], spec);
    for (Eigen::Index k = 0; k < ev.w1.cols(); ++k) r.dissimilarity.push_back(ev.w1(static_cast<Eigen::Index>(j), k));
  }

  Summary& s = ev.summary;
  s.problem = spec.name;
  s.shapes = static_cast<int>(shapes.size());
  const auto cs = stats(C), vs = stats(V);
  s.c_mean = cs.mean, s.c_std = cs.std, s.c_min = cs.min, s.c_max = cs.max;
  s.v_mean = vs.mean, s.v_std = vs.std, s.v_min = vs.min, s.v_max = vs.max;
  s.lvr = load_violation_ratio(shapes, spec, 0.5, LoadViolationMode::Any);
  s.lvr_all = load_violation_ratio(shapes, spec, 0.5, LoadViolationMode::All);
  s.ew1 = hill_d2(ev.w1);
  s.delta = clouds.size() >= 2 ? diversity_delta(chamfer_matrix(clouds, threads)).delta : 0.0;
  return ev;
}

BoundaryCloud density_boundary(const DensityGrid& rho, int steps) {
  const Grid2D& g = rho.grid();
  const auto& v = rho.values();
  // Bilinear interpolation between element centroids, clamped at the edges.
  FieldFunction field = [&g, &v](const Eigen::Matrix2Xd& pts) {
    Eigen::VectorXd out(pts.cols());
    for (Eigen::Index k = 0; k < pts.cols(); ++k) {
      const double fx = std::clamp((pts(0, k) - g.origin().x()) / g.hx() - 0.5, 0.0, g.nx() - 1.0);
      const double fy = std::clamp((pts(1, k) - g.origin().y()) / g.hy() - 0.5, 0.0, g.ny() - 1.0);
      const int i0 = std::min(static_cast<int>(fx), std::max(0, g.nx() - 2));
      const int j0 = std::min(static_cast<int>(fy), std::max(0, g.ny() - 2));
      const int i1 = std::min(i0 + 1, g.nx() - 1), j1 = std::min(j0 + 1, g.ny() - 1);
      const double tx = fx - i0, ty = fy - j0;
      out(k) = (1 - tx) * (1 - ty) * v(g.element(i0, j0)) + tx * (1 - ty) * v(g.element(i1, j0)) +
               (1 - tx) * ty * v(g.element(i0, j1)) + tx * ty * v(g.element(i1, j1));
    }
    return out;
  };
  return extract_boundary(field, g, {.level = kLevel, .steps = steps});
}

void write_summary(const std::filesystem::path& path, const Summary& s) {
  nlohmann::ordered_json j;
  j["problem"] = s.problem;
  j["shapes"] = s.shapes;
  j["C_mean"] = s.c_mean;
  j["C_std"] = s.c_std;
  j["C_min"] = s.c_min;
  j["C_max"] = s.c_max;
  j["V_mean"] = s.v_mean;
  j["V_std"] = s.v_std;
  j["V_min"] = s.v_min;
  j["V_max"] = s.v_max;
  j["LVR"] = s.lvr;
  j["LVR_all"] = s.lvr_all;
  j["EW1"] = s.ew1;
  j["delta"] = s.delta;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Summary read_summary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  const auto j = nlohmann::json::parse(in);
  Summary s;
  s.problem = j.at("problem").get<std::string>();
  s.shapes = j.at("shapes").get<int>();
  s.c_mean = j.at("C_mean");
  s.c_std = j.at("C_std");
  s.c_min = j.at("C_min");
  s.c_max = j.at("C_max");
  s.v_mean = j.at("V_mean");
  s.v_std = j.at("V_std");
  s.v_min = j.at("V_min");
  s.v_max = j.at("V_max");
  s.lvr = j.at("LVR");
  s.lvr_all = j.at("LVR_all");
  s.ew1 = j.at("EW1");
  s.delta = j.at("delta");
  return s;
}

void write_timing(const std::filesystem::path& path, double seconds) {
  nlohmann::ordered_json j;
  j["wall_seconds"] = seconds;
  j["wall_minutes"] = seconds / 60.0;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows) {
  auto out = open_out(path);
  out << "shape,compliance,volume_fraction,load_violation";
  for (std::size_t k = 0; k < rows.size(); ++k) out << ",w1_" << k;
  out << '\n';
  std::vector<double> mean_w1(rows.size(), 0.0);
  double mc = 0, mv = 0, ml = 0;
  for (const auto& r : rows) {
    out << r.shape << ',' << r.compliance << ',' << r.volume_fraction << ',' << r.load_violation;
    for (std::size_t k = 0; k < r.dissimilarity.size(); ++k) {
      out << ',' << r.dissimilarity[k];
      if (k < mean_w1.size()) mean_w1[k] += r.dissimilarity[k] / static_cast<double>(rows.size());
    }
    out << '\n';
    mc += r.compliance / static_cast<double>(rows.size());
    mv += r.volume_fraction / static_cast<double>(rows.size());
    ml += r.load_violation / static_cast<double>(rows.size());
  }
  if (!rows.empty()) {
    out << "mean," << mc << ',' << mv << ',' << ml;
    for (double w : mean_w1) out << ',' << w;
    out << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path, const RunReport& report) {
  auto out = open_out(path);
  out << "iteration,shape,compliance,volume_fraction,boundary_points,beta,learning_rate,objective,loss,delta";
  for (int i = 0; i < kConstraintCount; ++i) out << ",c_" << constraint_name(i);
  for (int i = 0; i < kConstraintCount; ++i) out << ",lambda_" << constraint_name(i);
  for (int i = 0; i < kConstraintCount; ++i) out << ",mu_" << constraint_name(i);
  out << ",skipped_points\n";
  std::size_t s = 0;
  for (const auto& it : report.iterations) {
    for (; s < report.shapes.size() && report.shapes[s].iteration == it.iteration; ++s) {
      const auto& sh = report.shapes[s];
      out << it.iteration << ',' << sh.shape << ',' << sh.compliance << ',' << sh.volume_fraction << ','
          << sh.boundary_points << ',' << it.beta << ',' << it.learning_rate << ',' << it.objective << ',' << it.loss
          << ',' << it.delta;
      for (double v : it.violation) out << ',' << v;
      for (double v : it.lambda) out << ',' << v;
      for (double v : it.mu) out << ',' << v;
      out << ',' << it.skipped_points << '\n';
    }
  }
}

void write_simp_report_csv(const std::filesystem::path& path, const SimpResult& result) {
  auto out = open_out(path);
  out << "iteration,shape,compliance,volume_fraction\n";
  for (std::size_t t = 0; t < result.compliance.size(); ++t)
    out << t << ",0," << result.compliance[t] << ',' << result.volume_fraction[t] << '\n';
}

void write_stamp(const std::filesystem::path& path, std::uint64_t seed, int threads, const std::string& command) {
  auto out = open_out(path);
  out << "tom " << version() << '\n' << "seed " << seed << '\n' << "threads " << threads << '\n'
      << "command " << command << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

}  // namespace tom::cli
