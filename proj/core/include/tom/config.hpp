#pragma once

#include "tom/filters.hpp"
#include "tom/random.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tom {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class VolumeMode { Hinge, Equality };

/// Everything a training run needs besides the problem geometry.
struct RunConfig {
  std::string problem = "mbb";
  int nx = 90;
  int ny = 30;

  std::vector<int> hidden_layers{32, 32, 32};
  double omega0 = 10.0;
  double s0 = 10.0;

  double learning_rate = 5e-5;
  double lr_decay = 400.0;  // iterations per halving; <= 0 disables decay

  double radius = 1.2;
  ModulationMode modulation = ModulationMode::CircleUniform;
  double penalty = 3.0;
  AnnealSchedule beta{.beta0 = 2.0, .beta_max = 64.0, .t0 = 0, .t1 = 400};

  bool diversity = true;
  double delta_star = 0.3;
  int diversity_start = 0;
  int boundary_steps = 10;
  int boundary_max_points = 512;

  int iterations = 400;
  int shapes = 25;

  double compliance_scale = 1.0;
  double volume_scale = 1.0;
  double diversity_scale = 1.0;
  double interface_scale = 1.0;
  double normal_scale = 1.0;
  double design_region_scale = 1.0;
  VolumeMode volume_mode = VolumeMode::Hinge;

  double alm_mu0 = 1.0;
  double alm_growth = 1.5;
  int alm_patience = 10;
  double alm_decay = 0.05;

  std::uint64_t seed = 0;
  int checkpoint_every = 0;  // 0 disables periodic checkpoints
  std::string interface_file;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Known presets: "paper" (per problem) and "small" (90 x 30 MBB only).
RunConfig make_preset(const std::string& problem, const std::string& preset);

/// All recognised keys, in snapshot order.
const std::vector<std::string>& config_keys();

/// Parses "key = value" lines ('#' starts a comment). A file that sets
/// `preset = <name>` (and optionally `problem`) starts from that preset and
/// overrides it; otherwise every key in config_keys() except `preset` must
/// be present. Unknown or missing keys raise ConfigError with the key name.
RunConfig parse_config(const std::string& text);
RunConfig read_config(const std::filesystem::path& path);

/// Applies one key/value pair; throws ConfigError on unknown keys or
/// malformed values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Complete snapshot in the same format parse_config accepts.
std::string format_config(const RunConfig& config);

}  // namespace tom
