#include "tom_cli/cli.hpp"

#include "tom_cli/artifacts.hpp"

#include <tom/config.hpp>
#include <tom/fem.hpp>
#include <tom/filters.hpp>
#include <tom/parallel.hpp>
#include <tom/postprocess.hpp>
#include <tom/problem.hpp>
#include <tom/simp.hpp>
#include <tom/trainer.hpp>
#include <tom/wire_net.hpp>

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace tom::cli {

namespace {

struct CommonArgs {
  std::string config;
  std::string problem = "mbb";
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 0;
  std::vector<std::string> sets;
};

std::string numbered(const std::string& stem, int k, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02d", k);
  return stem + buf + ext;
}

std::string default_preset(const std::string& problem) { return problem == "mbb" ? "small" : "paper"; }

RunConfig resolve_config(const CommonArgs& a, bool preset_given) {
  RunConfig c;
  if (!a.config.empty()) {
    if (preset_given) throw ConfigError("--preset cannot be combined with --config");
    c = read_config(a.config);
  } else {
    c = make_preset(a.problem, a.preset.empty() ? default_preset(a.problem) : a.preset);
  }
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(' '));
      s.erase(s.find_last_not_of(' ') + 1);
      return s;
    };
    set_config_value(c, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  if (a.seed) c.seed = *a.seed;
  c.validate();
  return c;
}

int thread_count(int requested) { return requested > 0 ? requested : default_thread_count(); }

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ' ';
    s += args[i];
  }
  return s;
}

void write_shapes(const fs::path& dir, const std::vector<DensityGrid>& shapes) {
  fs::create_directories(dir);
  for (std::size_t j = 0; j < shapes.size(); ++j) {
    write_density(dir / numbered("shape_", static_cast<int>(j), ".density"), shapes[j]);
    write_pgm(dir / numbered("shape_", static_cast<int>(j), ".pgm"), shapes[j]);
  }
}

void print_summary(std::ostream& out, const Summary& s) {
  out << std::setprecision(6) << "C_mean " << s.c_mean << "  C_min " << s.c_min << "  C_max " << s.c_max
      << "  V_mean " << s.v_mean << "  LVR " << s.lvr << "  EW1 " << s.ew1 << "  delta " << s.delta << '\n';
}

std::vector<Eigen::Vector2d> evaluation_modulations(const RunConfig& c) {
  Rng unused(0);
  return sample_modulations(unused, c.shapes, c.radius, ModulationMode::CircleFixed);
}

int cmd_optimize(const CommonArgs& a, bool preset_given, const std::string& command, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig config = resolve_config(a, preset_given);
  const ProblemSpec spec = make_problem(config.problem, config.nx, config.ny);
  const int threads = thread_count(a.threads);
  const fs::path dir = a.out.empty() ? fs::path("runs") / ("optimize-" + config.problem) : fs::path(a.out);
  fs::create_directories(dir);
  write_text(dir / "config.txt", format_config(config));
  write_stamp(dir / "stamp.txt", config.seed, threads, command);

  std::optional<InterfaceSpec> interface;
  if (!config.interface_file.empty()) interface = read_interface(config.interface_file);

  TrainHooks hooks;
  hooks.threads = threads;
  if (interface) hooks.interface = &*interface;
  if (config.checkpoint_every > 0) {
    fs::create_directories(dir / "checkpoints");
    hooks.checkpoint = [&](int t, const WireNet& net) {
      char name[32];
      std::snprintf(name, sizeof name, "iter_%06d.txt", t);
      write_checkpoint(dir / "checkpoints" / name, net);
    };
  }
  hooks.progress = [&](const IterationRow& row) {
    if (row.iteration % 10 == 0 || row.iteration + 1 == config.iterations)
      out << "iter " << row.iteration << "  objective " << std::setprecision(6) << row.objective << "  c_volume "
          << row.violation[kVolume] << "  delta " << row.delta << "  beta " << row.beta << '\n';
  };

  const TrainResult result = train(spec, config, hooks);
  write_checkpoint(dir / "checkpoint.txt", result.net);
  write_report_csv(dir / "report.csv", result.report);

  const double beta = final_beta(config);
  std::vector<DensityGrid> shapes;
  std::vector<BoundaryCloud> clouds;
  const auto mods = evaluation_modulations(config);
  for (std::size_t j = 0; j < mods.size(); ++j) {
    shapes.push_back(shape_density(result.net, mods[j], spec.grid, beta));
    clouds.push_back(extract_boundary(result.net, mods[j], spec.grid,
                                      {.level = spec.level, .steps = config.boundary_steps}, static_cast<int>(j)));
  }
  write_shapes(dir / "shapes", shapes);
  const auto ev = evaluate_batch(shapes, clouds, spec, config.penalty, config.seed, threads);
  write_metrics_csv(dir / "metrics.csv", ev.rows);
  write_summary(dir / "summary.json", ev.summary);
  write_timing(dir / "timing.json", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  print_summary(out, ev.summary);
  return kOk;
}

int cmd_baseline(const CommonArgs& a, bool preset_given, int iterations, const std::string& command,
                 std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig config = resolve_config(a, preset_given);
  const ProblemSpec spec = make_problem(config.problem, config.nx, config.ny);
  const int threads = thread_count(a.threads);
  SimpOptions options;
  options.penalty = config.penalty;
  if (iterations >= 0) options.iterations = iterations;

  const fs::path dir = a.out.empty() ? fs::path("runs") / ("baseline-" + config.problem) : fs::path(a.out);
  fs::create_directories(dir);
  std::ostringstream snap;
  snap << "problem = " << config.problem << "\nnx = " << config.nx << "\nny = " << config.ny
       << "\npenalty = " << options.penalty << "\niterations = " << options.iterations
       << "\nmove_limit = " << options.move_limit << "\nbeta0 = " << options.beta.beta0
       << "\nbeta_max = " << options.beta.beta_max << "\nbeta_start = " << options.beta.t0
       << "\nbeta_end = " << options.beta.t1 << "\nfilter_radius = " << options.filter_radius
       << "\nvolume_tolerance = " << options.volume_tolerance << '\n';
  write_text(dir / "config.txt", snap.str());
  write_stamp(dir / "stamp.txt", config.seed, threads, command);

  const SimpResult result = optimize_simp(spec, options);
  write_simp_report_csv(dir / "report.csv", result);
  write_density(dir / "design_variables.density", DensityGrid(spec.grid, result.design_variables));
  write_shapes(dir / "shapes", {result.design});
  const auto ev = evaluate_batch({result.design}, {density_boundary(result.design)}, spec, options.penalty,
                                 config.seed, threads);
  write_metrics_csv(dir / "metrics.csv", ev.rows);
  write_summary(dir / "summary.json", ev.summary);
  write_timing(dir / "timing.json", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  if (result.bisection_failures > 0)
    out << "warning: volume bisection missed the tolerance " << result.bisection_failures << " times\n";
  print_summary(out, ev.summary);
  return kOk;
}

ProblemSpec problem_for(const std::string& name, const DensityGrid& rho) {
  ProblemSpec spec = make_problem(name, rho.grid().nx(), rho.grid().ny());
  if (!(spec.grid == rho.grid()))
    throw std::invalid_argument("density grid does not match the " + name + " problem domain");
  return spec;
}

int cmd_eval(const CommonArgs& a, const std::vector<std::string>& files, double penalty, std::ostream& out) {
  if (files.empty()) throw CLI::ValidationError("eval", "no density files given");
  std::vector<DensityGrid> shapes;
  std::vector<BoundaryCloud> clouds;
  for (const auto& f : files) {
    shapes.push_back(read_density(f));
    clouds.push_back(density_boundary(shapes.back()));
  }
  const ProblemSpec spec = problem_for(a.problem, shapes.front());
  for (const auto& s : shapes)
    if (!(s.grid() == spec.grid)) throw std::invalid_argument("eval: density files use different grids");
  const fs::path dir = a.out.empty() ? fs::path("runs") / "eval" : fs::path(a.out);
  fs::create_directories(dir);
  const auto ev = evaluate_batch(shapes, clouds, spec, penalty, a.seed.value_or(0), thread_count(a.threads));
  write_metrics_csv(dir / "metrics.csv", ev.rows);
  write_summary(dir / "summary.json", ev.summary);
  print_summary(out, ev.summary);
  return kOk;
}

int cmd_postprocess(const CommonArgs& a, const std::string& file, const std::string& method, double penalty,
                    std::ostream& out) {
  const DensityGrid input = read_density(file);
  const ProblemSpec spec = problem_for(a.problem, input);
  const fs::path dir = a.out.empty() ? fs::path("runs") / "postprocess" : fs::path(a.out);
  fs::create_directories(dir);

  const FemSolver solver(spec);
  const double c_in = solver.solve(input, penalty).compliance;
  std::optional<DensityGrid> output;
  int components = 0, removed = 0;
  bool empty = false;
  if (method == "a") {
    auto r = postprocess_a(input, spec);
    output = std::move(r.rho);
    components = r.components;
    removed = r.removed_components;
    empty = r.empty;
    if (empty) out << "warning: no component touches a support or load; output is empty\n";
  } else {
    SimpOptions base;
    base.penalty = penalty;
    output = finetune(input, spec, 0.05, 0.1, base).design;
    std::vector<char> mask(spec.grid.element_count());
    for (std::size_t e = 0; e < mask.size(); ++e) mask[e] = (*output)[static_cast<Eigen::Index>(e)] > 0.5;
    label_components(spec.grid, mask, &components);
  }
  const double c_out = solver.solve(*output, penalty).compliance;
  write_density(dir / "post.density", *output);
  write_pgm(dir / "post.pgm", *output);
  {
    std::ostringstream csv;
    csv << std::setprecision(17)
        << "method,input_compliance,output_compliance,input_volume_fraction,output_volume_fraction,components,"
           "removed_components,empty_warning,load_violation\n"
        << method << ',' << c_in << ',' << c_out << ',' << input.volume_fraction() << ','
        << output->volume_fraction() << ',' << components << ',' << removed << ',' << (empty ? 1 : 0) << ','
        << load_violation(*output, spec) << '\n';
    write_text(dir / "postprocess.csv", csv.str());
  }
  out << std::setprecision(6) << "method " << method << "  C_in " << c_in << "  C_out " << c_out << "  components "
      << components << '\n';
  return kOk;
}

int cmd_export_boundary(const CommonArgs& a, const std::string& source, int steps, std::ostream& out) {
  const fs::path src(source);
  const fs::path dir = a.out.empty() ? fs::path("runs") / "boundary" : fs::path(a.out);
  fs::create_directories(dir);
  int written = 0;
  if (fs::is_directory(src)) {
    const RunConfig config = read_config(src / "config.txt");
    const WireNet net = read_checkpoint(src / "checkpoint.txt");
    const ProblemSpec spec = make_problem(config.problem, config.nx, config.ny);
    const auto mods = evaluation_modulations(config);
    for (std::size_t j = 0; j < mods.size(); ++j) {
      const auto cloud =
          extract_boundary(net, mods[j], spec.grid, {.level = spec.level, .steps = steps}, static_cast<int>(j));
      write_boundary(dir / numbered("boundary_", static_cast<int>(j), ".txt"), cloud);
      ++written;
    }
  } else {
    const auto cloud = density_boundary(read_density(src), steps);
    write_boundary(dir / "boundary_00.txt", cloud);
    written = 1;
  }
  out << "wrote " << written << " boundary file(s) to " << dir.string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-solution topology optimization with a modulated neural density field", "tom"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  CommonArgs common;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config) {
      sub->add_option("--config", common.config, "key = value run configuration");
      sub->add_option("--preset", common.preset, "paper or small")->check(CLI::IsMember({"paper", "small"}));
      sub->add_option("--set", common.sets, "override one config key (key=value)");
    }
    sub->add_option("--problem", common.problem, "mbb or cantilever")->check(CLI::IsMember({"mbb", "cantilever"}));
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--threads", common.threads, "worker threads (default: TOM_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* optimize = app.add_subcommand("optimize", "train the modulated field and export a shape batch");
  add_common(optimize, true);
  auto* baseline = app.add_subcommand("baseline", "run the SIMP reference optimizer");
  add_common(baseline, true);
  int baseline_iterations = -1;
  baseline->add_option("--iterations", baseline_iterations, "SIMP iterations (default 400)")
      ->check(CLI::NonNegativeNumber);

  auto* eval = app.add_subcommand("eval", "recompute metrics for density files");
  add_common(eval, false);
  std::vector<std::string> files;
  double penalty = 3.0;
  eval->add_option("files", files, "density files")->required();
  eval->add_option("--penalty", penalty, "SIMP penalty for compliance");

  auto* post = app.add_subcommand("postprocess", "post-process one density file");
  add_common(post, false);
  std::string post_file, method = "a";
  post->add_option("file", post_file, "density file")->required();
  post->add_option("--method", method, "a: floater removal and closing, b: short SIMP refinement")
      ->check(CLI::IsMember({"a", "b"}));
  post->add_option("--penalty", penalty, "SIMP penalty for compliance");

  auto* exportb = app.add_subcommand("export-boundary", "write boundary point clouds");
  add_common(exportb, false);
  std::string source;
  int steps = 10;
  exportb->add_option("source", source, "run directory (config.txt + checkpoint.txt) or density file")->required();
  exportb->add_option("--steps", steps, "bisection steps")->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  }

  auto seed_given = [&](CLI::App* sub) { return sub->count("--seed") > 0; };
  try {
    for (auto* sub : {optimize, baseline, eval, post, exportb})
      if (sub->parsed() && seed_given(sub)) common.seed = seed;
    const std::string command = joined(args);
    if (optimize->parsed()) return cmd_optimize(common, optimize->count("--preset") > 0, command, out);
    if (baseline->parsed())
      return cmd_baseline(common, baseline->count("--preset") > 0, baseline_iterations, command, out);
    if (eval->parsed()) return cmd_eval(common, files, penalty, out);
    if (post->parsed()) return cmd_postprocess(common, post_file, method, penalty, out);
    if (exportb->parsed()) return cmd_export_boundary(common, source, steps, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const TrainError& e) {
    err << "training failed: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const FemError& e) {
    err << "FEM failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kUsageError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace tom::cli
