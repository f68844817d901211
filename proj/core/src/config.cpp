#include "tom/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace tom {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw ConfigError("config key '" + key + "': invalid value '" + value + "'");
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos != value.size()) bad_value(key, value);
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, value);
  }
}

long long to_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) bad_value(key, value);
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  bad_value(key, value);
}

std::vector<int> to_layers(const std::string& key, const std::string& value) {
  // "32x3" or "32,32,32"
  std::vector<int> out;
  const auto x = value.find('x');
  if (x != std::string::npos) {
    const auto width = to_int(key, value.substr(0, x));
    const auto depth = to_int(key, value.substr(x + 1));
    if (width < 1 || depth < 1 || depth > 64) bad_value(key, value);
    out.assign(static_cast<std::size_t>(depth), static_cast<int>(width));
    return out;
  }
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto w = to_int(key, trim(item));
    if (w < 1) bad_value(key, value);
    out.push_back(static_cast<int>(w));
  }
  if (out.empty()) bad_value(key, value);
  return out;
}

std::string fmt(double d) {
  std::ostringstream os;
  os << std::setprecision(17) << d;
  return os.str();
}

std::string layers_string(const std::vector<int>& layers) {
  std::string s;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(layers[i]);
  }
  return s;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config key '" + key + "': " + what);
}

}  // namespace

void RunConfig::validate() const {
  require(problem == "mbb" || problem == "cantilever", "problem", "must be mbb or cantilever");
  require(nx >= 4 && ny >= 4, "nx", "grid must be at least 4 x 4");
  require(!hidden_layers.empty(), "hidden_layers", "need at least one layer");
  require(omega0 > 0, "omega0", "must be positive");
  require(s0 > 0, "s0", "must be positive");
  require(learning_rate > 0, "learning_rate", "must be positive");
  require(radius > 0, "radius", "must be positive");
  require(penalty >= 1, "penalty", "must be >= 1");
  require(beta.beta0 > 0, "beta0", "must be positive");
  require(beta.beta_max >= beta.beta0, "beta_max", "must be >= beta0");
  require(beta.t1 > beta.t0, "beta_end", "must exceed beta_start");
  require(delta_star >= 0, "delta_star", "must be non-negative");
  require(diversity_start >= 0, "diversity_start", "must be non-negative");
  require(boundary_steps >= 1, "boundary_steps", "must be >= 1");
  require(boundary_max_points >= 1, "boundary_max_points", "must be >= 1");
  require(iterations >= 0, "iterations", "must be non-negative");
  require(shapes >= 1, "shapes", "must be >= 1");
  require(!diversity || shapes >= 2, "shapes", "diversity needs at least 2 shapes");
  require(compliance_scale >= 0, "compliance_scale", "must be non-negative");
  require(volume_scale >= 0, "volume_scale", "must be non-negative");
  require(diversity_scale >= 0, "diversity_scale", "must be non-negative");
  require(interface_scale >= 0, "interface_scale", "must be non-negative");
  require(normal_scale >= 0, "normal_scale", "must be non-negative");
  require(design_region_scale >= 0, "design_region_scale", "must be non-negative");
  require(alm_mu0 > 0, "alm_mu0", "must be positive");
  require(alm_growth >= 1, "alm_growth", "must be >= 1");
  require(alm_patience >= 1, "alm_patience", "must be >= 1");
  require(alm_decay >= 0 && alm_decay < 1, "alm_decay", "must be in [0, 1)");
  require(checkpoint_every >= 0, "checkpoint_every", "must be non-negative");
}

RunConfig make_preset(const std::string& problem, const std::string& preset) {
  RunConfig c;
  if (preset == "paper") {
    c.problem = problem;
    c.hidden_layers = {32, 32, 32};
    c.learning_rate = 5e-5;
    c.penalty = 3.0;
    c.shapes = 25;
    if (problem == "mbb") {
      c.nx = 180;
      c.ny = 60;
      c.omega0 = 10.0;
      c.s0 = 10.0;
      c.lr_decay = 400;
      c.radius = 1.2;
      c.delta_star = 0.3;
      c.iterations = 400;
      c.beta = {.beta0 = 2.0, .beta_max = 64.0, .t0 = 0, .t1 = 400};
    } else if (problem == "cantilever") {
      c.nx = 150;
      c.ny = 100;
      c.omega0 = 9.0;
      c.s0 = 10.0;
      c.lr_decay = 200;
      c.radius = 0.6;
      c.delta_star = 0.4;
      c.iterations = 1000;
      c.diversity_scale = 10.0;
      c.beta = {.beta0 = 2.0, .beta_max = 64.0, .t0 = 0, .t1 = 400};
    } else {
      throw ConfigError("config key 'problem': unknown problem '" + problem + "'");
    }
    return c;
  }
  if (preset == "small") {
    if (problem != "mbb") throw ConfigError("config key 'preset': small preset exists only for mbb");
    c.problem = "mbb";
    c.nx = 90;
    c.ny = 30;
    c.hidden_layers = {32, 32, 32};
    c.omega0 = 10.0;
    c.s0 = 10.0;
    c.learning_rate = 1e-2;
    c.lr_decay = 100;
    c.radius = 0.3;
    c.delta_star = 0.3;
    c.iterations = 200;
    c.shapes = 9;
    c.beta = {.beta0 = 2.0, .beta_max = 8.0, .t0 = 0, .t1 = 200};
    return c;
  }
  throw ConfigError("config key 'preset': unknown preset '" + preset + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "problem",          "nx",
      "ny",               "hidden_layers",
      "omega0",           "s0",
      "learning_rate",    "lr_decay",
      "radius",           "modulation",
      "penalty",          "beta0",
      "beta_max",         "beta_start",
      "beta_end",         "diversity",
      "delta_star",       "diversity_start",
      "boundary_steps",   "boundary_max_points",
      "iterations",       "shapes",
      "compliance_scale", "volume_scale",
      "diversity_scale",  "interface_scale",
      "normal_scale",     "design_region_scale",
      "volume_mode",      "alm_mu0",
      "alm_growth",       "alm_patience",
      "alm_decay",        "seed",
      "checkpoint_every", "interface_file",
  };
  return keys;
}

void set_config_value(RunConfig& c, const std::string& key, const std::string& v) {
  auto as_int = [&] { return static_cast<int>(to_int(key, v)); };
  if (key == "problem") c.problem = v;
  else if (key == "nx") c.nx = as_int();
  else if (key == "ny") c.ny = as_int();
  else if (key == "hidden_layers") c.hidden_layers = to_layers(key, v);
  else if (key == "omega0") c.omega0 = to_double(key, v);
  else if (key == "s0") c.s0 = to_double(key, v);
  else if (key == "learning_rate") c.learning_rate = to_double(key, v);
  else if (key == "lr_decay") c.lr_decay = to_double(key, v);
  else if (key == "radius") c.radius = to_double(key, v);
  else if (key == "modulation") {
    if (v == "uniform") c.modulation = ModulationMode::CircleUniform;
    else if (v == "fixed") c.modulation = ModulationMode::CircleFixed;
    else bad_value(key, v);
  } else if (key == "penalty") c.penalty = to_double(key, v);
  else if (key == "beta0") c.beta.beta0 = to_double(key, v);
  else if (key == "beta_max") c.beta.beta_max = to_double(key, v);
  else if (key == "beta_start") c.beta.t0 = as_int();
  else if (key == "beta_end") c.beta.t1 = as_int();
  else if (key == "diversity") c.diversity = to_bool(key, v);
  else if (key == "delta_star") c.delta_star = to_double(key, v);
  else if (key == "diversity_start") c.diversity_start = as_int();
  else if (key == "boundary_steps") c.boundary_steps = as_int();
  else if (key == "boundary_max_points") c.boundary_max_points = as_int();
  else if (key == "iterations") c.iterations = as_int();
  else if (key == "shapes") c.shapes = as_int();
  else if (key == "compliance_scale") c.compliance_scale = to_double(key, v);
  else if (key == "volume_scale") c.volume_scale = to_double(key, v);
  else if (key == "diversity_scale") c.diversity_scale = to_double(key, v);
  else if (key == "interface_scale") c.interface_scale = to_double(key, v);
  else if (key == "normal_scale") c.normal_scale = to_double(key, v);
  else if (key == "design_region_scale") c.design_region_scale = to_double(key, v);
  else if (key == "volume_mode") {
    if (v == "hinge") c.volume_mode = VolumeMode::Hinge;
    else if (v == "equality") c.volume_mode = VolumeMode::Equality;
    else bad_value(key, v);
  } else if (key == "alm_mu0") c.alm_mu0 = to_double(key, v);
  else if (key == "alm_growth") c.alm_growth = to_double(key, v);
  else if (key == "alm_patience") c.alm_patience = as_int();
  else if (key == "alm_decay") c.alm_decay = to_double(key, v);
  else if (key == "seed") {
    const auto s = to_int(key, v);
    if (s < 0) bad_value(key, v);
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "checkpoint_every") c.checkpoint_every = as_int();
  else if (key == "interface_file") c.interface_file = v;
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("duplicate config key '" + key + "'");
    entries.emplace_back(std::move(key), std::move(value));
  }

  std::string preset;
  std::string problem = "mbb";
  for (const auto& [k, v] : entries) {
    if (k == "preset") preset = v;
    if (k == "problem") problem = v;
  }

  RunConfig c;
  if (!preset.empty()) {
    c = make_preset(problem, preset);
  } else {
    for (const auto& key : config_keys()) {
      if (key == "interface_file") continue;  // optional
      if (!seen.contains(key)) throw ConfigError("missing config key '" + key + "'");
    }
  }
  for (const auto& [k, v] : entries) {
    if (k == "preset") continue;
    set_config_value(c, k, v);
  }
  c.validate();
  return c;
}

RunConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  os << "problem = " << c.problem << '\n'
     << "nx = " << c.nx << '\n'
     << "ny = " << c.ny << '\n'
     << "hidden_layers = " << layers_string(c.hidden_layers) << '\n'
     << "omega0 = " << fmt(c.omega0) << '\n'
     << "s0 = " << fmt(c.s0) << '\n'
     << "learning_rate = " << fmt(c.learning_rate) << '\n'
     << "lr_decay = " << fmt(c.lr_decay) << '\n'
     << "radius = " << fmt(c.radius) << '\n'
     << "modulation = " << (c.modulation == ModulationMode::CircleUniform ? "uniform" : "fixed") << '\n'
     << "penalty = " << fmt(c.penalty) << '\n'
     << "beta0 = " << fmt(c.beta.beta0) << '\n'
     << "beta_max = " << fmt(c.beta.beta_max) << '\n'
     << "beta_start = " << c.beta.t0 << '\n'
     << "beta_end = " << c.beta.t1 << '\n'
     << "diversity = " << (c.diversity ? "true" : "false") << '\n'
     << "delta_star = " << fmt(c.delta_star) << '\n'
     << "diversity_start = " << c.diversity_start << '\n'
     << "boundary_steps = " << c.boundary_steps << '\n'
     << "boundary_max_points = " << c.boundary_max_points << '\n'
     << "iterations = " << c.iterations << '\n'
     << "shapes = " << c.shapes << '\n'
     << "compliance_scale = " << fmt(c.compliance_scale) << '\n'
     << "volume_scale = " << fmt(c.volume_scale) << '\n'
     << "diversity_scale = " << fmt(c.diversity_scale) << '\n'
     << "interface_scale = " << fmt(c.interface_scale) << '\n'
     << "normal_scale = " << fmt(c.normal_scale) << '\n'
     << "design_region_scale = " << fmt(c.design_region_scale) << '\n'
     << "volume_mode = " << (c.volume_mode == VolumeMode::Hinge ? "hinge" : "equality") << '\n'
     << "alm_mu0 = " << fmt(c.alm_mu0) << '\n'
     << "alm_growth = " << fmt(c.alm_growth) << '\n'
     << "alm_patience = " << c.alm_patience << '\n'
     << "alm_decay = " << fmt(c.alm_decay) << '\n'
     << "seed = " << c.seed << '\n'
     << "checkpoint_every = " << c.checkpoint_every << '\n';
  if (!c.interface_file.empty()) os << "interface_file = " << c.interface_file << '\n';
  return os.str();
}

}  // namespace tom
