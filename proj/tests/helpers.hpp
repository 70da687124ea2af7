#pragma once

#include "vbmot/core.hpp"
#include "vbmot/params.hpp"

#include <random>
#include <vector>

namespace testing {

inline vbmot::Mat6 random_spd6(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  vbmot::Mat6 a;
  for (int i = 0; i < 36; ++i) a(i) = n(rng);
  return scale * (a * a.transpose() / 6.0 + 0.1 * vbmot::Mat6::Identity());
}

inline vbmot::Mat4 random_spd4(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  vbmot::Mat4 a;
  for (int i = 0; i < 16; ++i) a(i) = n(rng);
  return scale * (a * a.transpose() / 4.0 + 0.1 * vbmot::Mat4::Identity());
}

inline vbmot::AppearanceHistogram random_histogram(std::mt19937_64& rng, std::size_t bins) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(bins);
  for (double& v : w) v = e(rng);
  return vbmot::AppearanceHistogram::from_weights(w);
}

/// One body detector with identity projection and unit-ish noise.
inline vbmot::ModelParams simple_params(double clutter_density = 1e-6) {
  vbmot::ModelParams p;
  vbmot::DetectorModel d;
  d.obs_covariance = vbmot::Mat4::Identity() * 4.0;
  d.clutter_density = clutter_density;
  d.appearance_clutter_density = 1.0;
  p.detectors.push_back(d);
  p.dynamics_covariance = vbmot::Mat6::Identity() * 0.25;
  p.lambda_appearance = 10.0;
  p.w_lambda = 1.0;
  p.birth.flat_mean << 320, 240, 150, 200, 0, 0;
  vbmot::Vec6 s;
  s << 640, 480, 640, 480, 10, 10;
  p.birth.flat_covariance = s.array().square().matrix().asDiagonal();
  p.birth.birth_covariance = vbmot::Mat6::Identity() * 9.0;
  return p;
}

inline vbmot::Detection detection(int detector_id, double x, double y, double w, double h, int frame,
                                  vbmot::AppearanceHistogram hist = vbmot::AppearanceHistogram::uniform(4)) {
  vbmot::Detection d;
  d.detector_id = detector_id;
  d.box = {x, y, w, h};
  d.appearance = std::move(hist);
  d.frame = frame;
  return d;
}

}  // namespace testing
