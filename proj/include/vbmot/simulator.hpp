#pragma once

// Synthetic scenes drawn from the tracker's own generative model: linear
// constant-velocity targets, per-detector Gaussian detections with misses,
// Poisson clutter with uniform boxes and uniform-Dirichlet histograms.

#include "vbmot/core.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vbmot {

struct TargetScript {
  int birth_frame = 1;
  int death_frame = 100;  // last frame the target exists
  Vec6 initial = Vec6::Zero();
  /// Frames [occlusion_start, occlusion_end] produce no detections.
  int occlusion_start = 0;
  int occlusion_end = -1;

  bool occluded(int frame) const { return frame >= occlusion_start && frame <= occlusion_end; }
};

struct SimDetector {
  Vec4 scale = Vec4::Ones();
  Vec4 offset = Vec4::Zero();
  Vec4 noise_std = Vec4::Constant(2.0);
  double miss_probability = 0.0;
  double clutter_rate = 0.0;
};

struct ScenarioConfig {
  double image_width = 640.0;
  double image_height = 480.0;
  int frames = 100;
  Vec6 dynamics_std = Vec6::Zero();
  std::vector<TargetScript> targets;
  std::vector<SimDetector> detectors{SimDetector{}};
  std::size_t bins = 16;
  double reference_concentration = 1.0;
  double observation_concentration = 200.0;
  double clutter_min_w = 20.0;
  double clutter_max_w = 120.0;
  double clutter_min_h = 40.0;
  double clutter_max_h = 180.0;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on negative rates or probabilities outside [0,1].
  void validate() const;
};

struct GroundTruthRow {
  int frame = 0;
  int id = 0;
  BoundingBox box;
  bool visible = true;
};

struct GroundTruth {
  int frames = 0;
  std::vector<GroundTruthRow> rows;  // frame-major, ids ascending
  std::map<int, AppearanceHistogram> references;
};

struct SimulationOutput {
  GroundTruth truth;
  /// detections[t-1]: every detection of frame t, grouped by detector.
  std::vector<std::vector<Detection>> detections;
};

SimulationOutput simulate(const ScenarioConfig& config);

std::vector<std::string> scenario_preset_names();
/// "cpd-like" or "pets-like"; throws std::invalid_argument otherwise.
ScenarioConfig scenario_preset(const std::string& name);

}  // namespace vbmot
