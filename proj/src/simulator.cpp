#include "vbmot/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace vbmot {

void ScenarioConfig::validate() const {
  if (frames < 0) throw std::invalid_argument("frame count must be non-negative");
  if (!(image_width > 0.0) || !(image_height > 0.0)) throw std::invalid_argument("image size must be positive");
  if (bins == 0) throw std::invalid_argument("histograms need at least one bin");
  if ((dynamics_std.array() < 0.0).any()) throw std::invalid_argument("dynamics std must be non-negative");
  for (const SimDetector& d : detectors) {
    if (!(d.miss_probability >= 0.0 && d.miss_probability <= 1.0))
      throw std::invalid_argument("miss probability outside [0,1]");
    if (!(d.clutter_rate >= 0.0)) throw std::invalid_argument("clutter rate must be non-negative");
    if ((d.noise_std.array() < 0.0).any()) throw std::invalid_argument("detector noise must be non-negative");
  }
  if (clutter_min_w <= 0.0 || clutter_max_w < clutter_min_w || clutter_min_h <= 0.0 || clutter_max_h < clutter_min_h)
    throw std::invalid_argument("clutter box ranges invalid");
  if (!(observation_concentration > 0.0) || !(reference_concentration > 0.0))
    throw std::invalid_argument("Dirichlet concentrations must be positive");
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double normal(double std) {
    if (std == 0.0) return 0.0;
    return std::normal_distribution<double>(0.0, std)(rng_);
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool bernoulli(double p) { return std::bernoulli_distribution(p)(rng_); }
  int poisson(double rate) { return rate > 0.0 ? std::poisson_distribution<int>(rate)(rng_) : 0; }

  AppearanceHistogram dirichlet(const std::vector<double>& alpha) {
    std::vector<double> g(alpha.size());
    double total = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) total += (g[k] = std::gamma_distribution<double>(alpha[k], 1.0)(rng_));
    if (!(total > 0.0)) return AppearanceHistogram::uniform(alpha.size());
    // Tiny shapes can underflow to exact zeros; keep strictly positive bins.
    for (double& v : g) v = std::max(v, 1e-300);
    return AppearanceHistogram::from_weights(std::move(g));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

SimulationOutput simulate(const ScenarioConfig& config) {
  config.validate();
  Sampler s(config.seed);
  SimulationOutput out;
  out.truth.frames = config.frames;
  out.detections.resize(static_cast<std::size_t>(config.frames));

  const std::size_t n_targets = config.targets.size();
  std::vector<AppearanceHistogram> refs;
  for (std::size_t j = 0; j < n_targets; ++j) {
    refs.push_back(s.dirichlet(std::vector<double>(config.bins, config.reference_concentration)));
    out.truth.references.emplace(static_cast<int>(j) + 1, refs.back());
  }

  std::vector<Vec6> state(n_targets);
  const std::vector<double> flat(config.bins, 1.0);
  for (int t = 1; t <= config.frames; ++t) {
    std::vector<Detection>& frame_dets = out.detections[static_cast<std::size_t>(t - 1)];
    std::vector<int> alive;
    for (std::size_t j = 0; j < n_targets; ++j) {
      const TargetScript& script = config.targets[j];
      if (t < script.birth_frame || t > script.death_frame) continue;
      if (t == script.birth_frame) {
        state[j] = script.initial;
      } else {
        Vec6 next = apply_dynamics(state[j]);
        for (int c = 0; c < 6; ++c) next(c) += s.normal(config.dynamics_std(c));
        state[j] = next;
      }
      alive.push_back(static_cast<int>(j));
      out.truth.rows.push_back(GroundTruthRow{t, static_cast<int>(j) + 1, KinematicState::from_stacked(state[j]).box,
                                              !script.occluded(t)});
    }

    for (std::size_t i = 0; i < config.detectors.size(); ++i) {
      const SimDetector& d = config.detectors[i];
      const DetectorModel model = DetectorModel::affine(d.scale, d.offset, Mat4::Identity());
      for (int j : alive) {
        const TargetScript& script = config.targets[static_cast<std::size_t>(j)];
        const bool missed = s.bernoulli(d.miss_probability);
        if (missed || script.occluded(t)) continue;
        Vec4 y = project(model, state[static_cast<std::size_t>(j)]);
        for (int c = 0; c < 4; ++c) y(c) += s.normal(d.noise_std(c));
        y(2) = std::max(y(2), 1.0);
        y(3) = std::max(y(3), 1.0);
        std::vector<double> conc(config.bins);
        const auto ref = refs[static_cast<std::size_t>(j)].bins();
        for (std::size_t k = 0; k < config.bins; ++k) conc[k] = config.observation_concentration * ref[k];
        frame_dets.push_back(Detection{static_cast<int>(i) + 1, BoundingBox::from_vector(y), s.dirichlet(conc), t});
      }
      const int n_clutter = s.poisson(d.clutter_rate);
      for (int c = 0; c < n_clutter; ++c) {
        const double w = s.uniform(config.clutter_min_w, config.clutter_max_w);
        const double h = s.uniform(config.clutter_min_h, config.clutter_max_h);
        const double x = s.uniform(0.0, std::max(1.0, config.image_width - w));
        const double y = s.uniform(0.0, std::max(1.0, config.image_height - h));
        frame_dets.push_back(Detection{static_cast<int>(i) + 1, BoundingBox{x, y, w, h}, s.dirichlet(flat), t});
      }
    }
  }
  return out;
}

std::vector<std::string> scenario_preset_names() { return {"cpd-like", "pets-like"}; }

namespace {

Vec6 state_of(double x, double y, double w, double h, double vx, double vy) {
  Vec6 v;
  v << x, y, w, h, vx, vy;
  return v;
}

}  // namespace

ScenarioConfig scenario_preset(const std::string& name) {
  ScenarioConfig c;
  if (name == "cpd-like") {
    // Close view, slow people, body + face detectors; person 1 is hidden for
    // 50 frames and person 3 walks in mid-sequence.
    c.image_width = 640.0;
    c.image_height = 480.0;
    c.frames = 400;
    c.dynamics_std << 0.3, 0.3, 0.0, 0.0, 0.005, 0.005;
    c.targets = {
        TargetScript{1, 400, state_of(80, 150, 100, 150, 0.1, 0.0), 200, 249},
        TargetScript{1, 400, state_of(430, 160, 100, 150, -0.1, 0.05)},
        TargetScript{120, 400, state_of(260, 100, 90, 140, 0.05, 0.05)},
    };
    SimDetector body;
    body.noise_std << 3.0, 3.0, 2.0, 2.0;
    body.miss_probability = 0.05;
    body.clutter_rate = 0.5;
    SimDetector face;
    face.scale << 1.0, 1.0, 0.5, 0.35;
    face.offset << 25.0, 5.0, 0.0, 0.0;
    face.noise_std << 2.0, 2.0, 1.0, 1.0;
    face.miss_probability = 0.15;
    face.clutter_rate = 0.5;
    c.detectors = {body, face};
    c.clutter_min_w = 30.0;
    c.clutter_max_w = 120.0;
    c.clutter_min_h = 30.0;
    c.clutter_max_h = 180.0;
    c.seed = 7;
    return c;
  }
  if (name == "pets-like") {
    // Far view, a dozen pedestrians crossing on separate lanes, one detector.
    c.image_width = 768.0;
    c.image_height = 576.0;
    c.frames = 600;
    c.dynamics_std << 0.2, 0.2, 0.0, 0.0, 0.01, 0.01;
    for (int j = 0; j < 12; ++j) {
      const bool rightward = j % 2 == 0;
      const double speed = 0.8 + 0.05 * j;
      const int birth = 1 + 20 * j;
      const double y = 20.0 + 45.0 * j;
      TargetScript t;
      t.birth_frame = birth;
      t.death_frame = birth + 350;
      t.initial = state_of(rightward ? 40.0 : 700.0, y, 24.0, 60.0, rightward ? speed : -speed, 0.0);
      c.targets.push_back(t);
    }
    SimDetector body;
    body.noise_std << 2.0, 2.0, 1.0, 1.0;
    body.miss_probability = 0.1;
    body.clutter_rate = 2.0;
    c.detectors = {body};
    c.clutter_min_w = 15.0;
    c.clutter_max_w = 40.0;
    c.clutter_min_h = 40.0;
    c.clutter_max_h = 90.0;
    c.seed = 11;
    return c;
  }
  throw std::invalid_argument("unknown scenario preset '" + name + "'");
}

}  // namespace vbmot
