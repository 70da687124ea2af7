#pragma once

// Flat key=value configuration covering the model, birth, visibility,
// metrics and simulator settings. Unknown keys are rejected.
//
// Indexed keys use 1-based indices: detector<i>.*, sim.detector<i>.*,
// sim.target<j>. Setting `detectors` or `sim.targets` resizes the lists.

#include "vbmot/core.hpp"
#include "vbmot/metrics.hpp"
#include "vbmot/params.hpp"
#include "vbmot/simulator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vbmot {

struct DetectorConfig {
  Vec4 obs_std = Vec4(4.0, 4.0, 3.0, 3.0);
  Vec4 scale = Vec4::Ones();
  Vec4 offset = Vec4::Zero();
  double clutter_density = 0.0;             // 0: derived from image and box ranges
  double appearance_clutter_density = 0.0;  // 0: 1 / simplex volume
};

struct Config {
  double image_width = 640.0;
  double image_height = 480.0;
  double box_min_w = 10.0;
  double box_max_w = 300.0;
  double box_min_h = 10.0;
  double box_max_h = 400.0;

  std::vector<DetectorConfig> detectors{DetectorConfig{}};
  Vec6 dynamics_std = (Vec6() << 1.0, 1.0, 0.5, 0.5, 0.1, 0.1).finished();

  std::size_t appearance_bins = 16;
  double appearance_lambda = 10.0;
  std::size_t appearance_mc_samples = 100000;
  std::uint64_t appearance_mc_seed = 0x5eedcafe;

  VemOptions vem;
  int max_tracks = 64;

  int birth_window = 2;
  double birth_clutter_threshold = 0.5;
  double birth_gate_factor = 2.0;
  double birth_flat_velocity_std = 10.0;
  Vec6 birth_std = (Vec6() << 4.0, 4.0, 3.0, 3.0, 2.0, 2.0).finished();

  VisibilityParams visibility;

  double metrics_iou_threshold = 0.5;
  SetMetricOptions metrics_sets;
  bool metrics_visible_only = true;

  ScenarioConfig sim;

  /// Applies one `key=value`; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Applies a whole "key=value" assignment string.
  void apply(const std::string& assignment);
  /// Every key with its current value, one per line, deterministic order.
  std::string to_text() const;

  /// Derives densities, W_lambda and the birth prior; validates detectors.
  ModelParams model_params() const;
  double derived_clutter_density() const;
};

/// Parses a config file on top of `base` (defaults when omitted). Lines are
/// `key = value`; blank lines and lines starting with '#' are ignored.
Config load_config(const std::string& path, Config base = {});
Config parse_config(const std::string& text, const std::string& origin = "<string>", Config base = {});

/// Scenario preset plus the tracker settings tuned for it.
Config preset_config(const std::string& name);

}  // namespace vbmot
