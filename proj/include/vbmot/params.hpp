#pragma once

#include "vbmot/core.hpp"

#include <vector>

namespace vbmot {

struct BirthParams {
  int window = 2;  // L; candidates span L+1 consecutive frames
  Vec6 flat_mean = Vec6::Zero();
  Mat6 flat_covariance = Mat6::Identity();
  Mat6 birth_covariance = Mat6::Identity();
  double clutter_threshold = 0.5;
  /// Chaining gate, in multiples of the newer box's diagonal.
  double gate_factor = 2.0;
};

enum class VisibilityLikelihood {
  as_printed,  // p(nu | visible) = exp(-lambda nu)
  swapped,     // p(nu | visible) = 1 - exp(-lambda nu)
};

struct VisibilityParams {
  double pi_v = 0.9;
  double lambda = 5.0;
  VisibilityLikelihood orientation = VisibilityLikelihood::swapped;
  double report_threshold = 0.5;
};

struct VemOptions {
  int max_iterations = 10;
  double tolerance = 1e-4;  // on max |delta alpha|
  /// Weight of the uniform distribution mixed into the carried priors
  /// at the start of each frame.
  double prior_mix = 0.1;
  bool learn_obs_covariance = false;
  bool learn_dynamics_covariance = false;
};

struct ModelParams {
  std::vector<DetectorModel> detectors;
  Mat6 dynamics_covariance = Mat6::Identity();
  double lambda_appearance = 10.0;
  double w_lambda = 1.0;
  VisibilityParams visibility;
  BirthParams birth;
  VemOptions vem;
  int max_tracks = 64;

  const DetectorModel& detector(int detector_id) const;
};

}  // namespace vbmot
