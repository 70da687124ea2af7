#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "vbmot/birth.hpp"

#include <cmath>

using namespace vbmot;

namespace {

CandidateSequence sequence(const std::vector<Vec4>& boxes, int first_frame = 1, int detector = 1) {
  CandidateSequence c;
  for (std::size_t l = 0; l < boxes.size(); ++l) {
    Detection d;
    d.detector_id = detector;
    d.box = BoundingBox::from_vector(boxes[l]);
    d.appearance = AppearanceHistogram::uniform(4);
    d.frame = first_frame + static_cast<int>(l);
    c.detections.push_back(d);
  }
  return c;
}

double stacked(const CandidateSequence& c, const ModelParams& p) {
  std::vector<Vec4> ys;
  for (const auto& d : c.detections) ys.push_back(d.box.as_vector());
  const DetectorModel& det = p.detector(c.detector_id());
  return oracle::stacked_log_marginal(ys, det.projection, det.offset, det.obs_covariance, p.birth.flat_mean,
                                      p.birth.flat_covariance, p.dynamics_covariance);
}

}  // namespace

TEST_CASE("tau0 with a single frame is the flat-prior marginal") {
  const auto p = testing::simple_params();
  const auto c = sequence({Vec4(100, 120, 40, 80)});
  const DetectorModel& d = p.detectors[0];
  const Mat4 s = d.projection * p.birth.flat_covariance * d.projection.transpose() + d.obs_covariance;
  Eigen::VectorXd y = c.detections[0].box.as_vector();
  Eigen::VectorXd m = d.projection * p.birth.flat_mean + d.offset;
  CHECK(log_tau0(c, p) == doctest::Approx(oracle::log_gaussian(y, m, s)).epsilon(1e-12));
  CHECK(tau0(c, p) == doctest::Approx(std::exp(oracle::log_gaussian(y, m, s))).epsilon(1e-10));
}

TEST_CASE("tau0 sequential equals the stacked Gaussian") {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 400.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = testing::simple_params();
    p.detectors[0] = DetectorModel::affine(Vec4(1, 1, 0.6, 0.4), Vec4(5 * n(rng), 5 * n(rng), 0, 0),
                                           testing::random_spd4(rng, 4.0));
    p.dynamics_covariance = testing::random_spd6(rng, 0.5);
    const int len = 1 + trial % 4;
    std::vector<Vec4> boxes;
    for (int l = 0; l < len; ++l) boxes.emplace_back(u(rng), u(rng), 10 + u(rng) / 4, 10 + u(rng) / 4);
    const auto c = sequence(boxes);
    const double a = log_tau0(c, p);
    const double b = stacked(c, p);
    CHECK(std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("stationary sequences beat clutter, erratic ones lose") {
  const auto p = testing::simple_params(1.0 / (640.0 * 480.0 * 290.0 * 390.0));
  const auto still = sequence({Vec4(100, 100, 40, 80), Vec4(100, 100, 40, 80), Vec4(100, 100, 40, 80)});
  CHECK(log_tau0(still, p) > log_tau1(still, p));
  const auto jumpy = sequence({Vec4(100, 100, 40, 80), Vec4(120, 80, 40, 80), Vec4(100, 100, 40, 80)});
  CHECK(log_tau0(jumpy, p) < log_tau0(still, p));
}

TEST_CASE("tau1 is the product of clutter densities") {
  const auto p = testing::simple_params(1e-6);
  const auto c = sequence({Vec4(1, 2, 3, 4), Vec4(100, 2, 3, 4), Vec4(1, 200, 3, 4)});
  CHECK(tau1(c, p) == doctest::Approx(1e-18).epsilon(1e-10));
  CHECK(tau1(sequence({Vec4(1, 2, 3, 4)}), p) == doctest::Approx(1e-6));
  CHECK(tau1(sequence({Vec4(9, 9, 9, 9)}), p) == tau1(sequence({Vec4(1, 2, 3, 4)}), p));
}

TEST_CASE("candidate validity") {
  CHECK(sequence({Vec4(1, 1, 1, 1), Vec4(1, 1, 1, 1)}).valid());
  CandidateSequence gap = sequence({Vec4(1, 1, 1, 1), Vec4(1, 1, 1, 1)});
  gap.detections[1].frame += 1;
  CHECK_FALSE(gap.valid());
  CandidateSequence mixed = sequence({Vec4(1, 1, 1, 1), Vec4(1, 1, 1, 1)});
  mixed.detections[1].detector_id = 2;
  CHECK_FALSE(mixed.valid());
  CHECK_FALSE(CandidateSequence{}.valid());
}

TEST_CASE("scan_and_spawn on coincident clutter spawns one track at the newest box") {
  auto p = testing::simple_params(1.0 / (640.0 * 480.0 * 290.0 * 390.0));
  ClutterHistory h(2);
  int next = 5;
  for (int t = 1; t <= 3; ++t) {
    std::vector<Detection> d{testing::detection(1, 100 + 0.5 * t, 100, 40, 80, t)};
    h.push(t, d, {1.0}, 0.5);
  }
  const BirthOutcome out = scan_and_spawn(h, {}, p, next);
  REQUIRE(out.born.size() == 1);
  const Track& t = out.born[0];
  CHECK(t.id == 5);
  CHECK(next == 6);
  CHECK(t.exists);
  CHECK(t.belief.mean.head<4>() == Vec4(101.5, 100, 40, 80));
  CHECK(t.belief.mean.tail<2>() == Vec2::Zero());
  CHECK(t.belief.covariance == p.birth.birth_covariance);
  // Detections are consumed: a second scan finds nothing.
  CHECK(scan_and_spawn(h, {}, p, next).born.empty());
}

TEST_CASE("scan_and_spawn inverts the detector affine") {
  auto p = testing::simple_params(1e-12);
  p.detectors[0] = DetectorModel::affine(Vec4(1, 1, 0.5, 0.25), Vec4(10, 4, 0, 0), Mat4::Identity());
  p.detectors[0].clutter_density = 1e-12;
  ClutterHistory h(1);
  for (int t = 1; t <= 2; ++t) h.push(t, {testing::detection(1, 60, 40, 20, 20, t)}, {1.0}, 0.5);
  int next = 1;
  const auto out = scan_and_spawn(h, {}, p, next);
  REQUIRE(out.born.size() == 1);
  CHECK(out.born[0].belief.mean.head<4>().isApprox(Vec4(50, 36, 40, 80)));
}

TEST_CASE("scan_and_spawn respects thresholds, gaps, capacity and empty history") {
  const auto p0 = testing::simple_params(1.0 / (640.0 * 480.0 * 290.0 * 390.0));
  int next = 1;
  ClutterHistory empty(2);
  CHECK(scan_and_spawn(empty, {}, p0, next).born.empty());

  ClutterHistory low(2);
  for (int t = 1; t <= 3; ++t) low.push(t, {testing::detection(1, 100, 100, 40, 80, t)}, {0.3}, 0.5);
  CHECK(scan_and_spawn(low, {}, p0, next).born.empty());

  ClutterHistory gap(2);
  for (int t : {1, 2, 4}) gap.push(t, {testing::detection(1, 100, 100, 40, 80, t)}, {1.0}, 0.5);
  CHECK(scan_and_spawn(gap, {}, p0, next).born.empty());

  auto p = p0;
  p.max_tracks = 1;
  ClutterHistory full(2);
  for (int t = 1; t <= 3; ++t) full.push(t, {testing::detection(1, 100, 100, 40, 80, t)}, {1.0}, 0.5);
  const auto out = scan_and_spawn(full, std::vector<Track>(1), p, next);
  CHECK(out.born.empty());
  CHECK(out.capacity_skipped == 1);
}

TEST_CASE("uniform random clutter rarely spawns") {
  auto p = testing::simple_params(1.0 / (640.0 * 480.0 * 290.0 * 390.0));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> x(0, 640), y(0, 480), w(10, 300), hh(10, 400);
  std::poisson_distribution<int> count(2.0);
  ClutterHistory h(2);
  int next = 1, births = 0;
  for (int t = 1; t <= 100; ++t) {
    std::vector<Detection> d;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) d.push_back(testing::detection(1, x(rng), y(rng), w(rng), hh(rng), t));
    h.push(t, d, std::vector<double>(d.size(), 1.0), 0.5);
    births += static_cast<int>(scan_and_spawn(h, {}, p, next).born.size());
  }
  CHECK(births == 0);
}

TEST_CASE("state_box_from_observation inverts project") {
  const DetectorModel d = DetectorModel::affine(Vec4(1, 1, 0.5, 0.35), Vec4(25, 5, 0, 0), Mat4::Identity());
  Vec6 x;
  x << 100, 50, 60, 120, 3, 4;
  const BoundingBox y = BoundingBox::from_vector(project(d, x));
  CHECK(state_box_from_observation(d, y).as_vector().isApprox(x.head<4>()));
}
