#include "doctest.h"
#include "helpers.hpp"
#include "vbmot/core.hpp"
#include "vbmot/errors.hpp"

#include <Eigen/Eigenvalues>

using namespace vbmot;

namespace {
Vec6 v6(double a, double b, double c, double d, double e, double f) { return (Vec6() << a, b, c, d, e, f).finished(); }
}  // namespace

TEST_CASE("apply_dynamics adds velocity to position only") {
  CHECK(apply_dynamics(v6(1, 2, 3, 4, 5, 6)).isApprox(v6(6, 8, 3, 4, 5, 6)));
  CHECK(apply_dynamics(Vec6::Zero()) == Vec6::Zero());
  CHECK(apply_dynamics(v6(10, 10, 2, 2, -1, 0)).isApprox(v6(9, 10, 2, 2, -1, 0)));
}

TEST_CASE("apply_dynamics is linear") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 100; ++trial) {
    Vec6 x, y;
    for (int i = 0; i < 6; ++i) {
      x(i) = n(rng);
      y(i) = n(rng);
    }
    const double a = n(rng), b = n(rng);
    CHECK((apply_dynamics(a * x + b * y) - (a * apply_dynamics(x) + b * apply_dynamics(y))).norm() < 1e-12);
  }
}

TEST_CASE("project through identity and scaled detectors") {
  const Vec6 x = v6(1, 2, 3, 4, 5, 6);
  DetectorModel body;
  CHECK(project(body, x).isApprox(Vec4(1, 2, 3, 4)));
  const DetectorModel face = DetectorModel::affine(Vec4(1, 1, 0.5, 0.5), Vec4::Zero(), Mat4::Identity());
  CHECK(project(face, x).isApprox(Vec4(1, 2, 1.5, 2)));
  const DetectorModel shifted = DetectorModel::affine(Vec4(1, 1, 0.5, 0.5), Vec4(3, 1, 0, 0), Mat4::Identity());
  CHECK(project(shifted, x).isApprox(Vec4(4, 3, 1.5, 2)));
  const Vec6 still = v6(7, 8, 9, 10, 0, 0);
  CHECK(project(face, apply_dynamics(still)).isApprox(project(face, still)));
}

TEST_CASE("predict_belief closed forms") {
  GaussianBelief b;
  b.mean = Vec6::Zero();
  b.covariance = Mat6::Identity();
  const GaussianBelief p = predict_belief(b, Mat6::Zero());
  CHECK(p.mean == Vec6::Zero());
  CHECK((p.covariance - dynamics_matrix() * dynamics_matrix().transpose()).norm() < 1e-12);

  b.mean = v6(1, 2, 3, 4, 5, 6);
  b.covariance = Mat6::Zero();
  const GaussianBelief q = predict_belief(b, Mat6::Identity());
  CHECK(q.mean.isApprox(v6(6, 8, 3, 4, 5, 6)));
  CHECK((q.covariance - Mat6::Identity()).norm() < 1e-12);
}

TEST_CASE("predict_belief keeps covariance SPD and trace above the noise") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    GaussianBelief b;
    b.covariance = testing::random_spd6(rng);
    const Mat6 lambda = testing::random_spd6(rng, 0.5);
    const GaussianBelief p = predict_belief(b, lambda);
    CHECK((p.covariance - p.covariance.transpose()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Mat6>(p.covariance).eigenvalues().minCoeff() > 0.0);
    CHECK(p.covariance.trace() >= lambda.trace());
  }
}

TEST_CASE("make_spd symmetrizes, jitters and rejects") {
  Mat4 m = Mat4::Identity();
  m(0, 1) = 0.2;
  const Mat4 s = make_spd<4>(m);
  CHECK(s(0, 1) == doctest::Approx(0.1));
  CHECK(s(1, 0) == doctest::Approx(0.1));
  Mat4 singular = Mat4::Zero();
  singular(0, 0) = 1.0;
  const Mat4 j = make_spd<4>(singular);
  CHECK(j(1, 1) == doctest::Approx(kSpdJitter));
  Mat4 neg = -Mat4::Identity();
  CHECK_THROWS_AS(make_spd<4>(neg), NumericError);
}

TEST_CASE("histogram constructors normalize") {
  const auto h = AppearanceHistogram::from_weights({1, 3});
  CHECK(h[0] == doctest::Approx(0.25));
  CHECK(h[1] == doctest::Approx(0.75));
  const auto u = AppearanceHistogram::uniform(8);
  double sum = 0.0;
  for (double b : u.bins()) sum += b;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(AppearanceHistogram::from_weights({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(AppearanceHistogram::from_weights({1, -1}), std::invalid_argument);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const auto r = testing::random_histogram(rng, 12);
    double s = 0.0;
    for (double b : r.bins()) {
      CHECK(b >= 0.0);
      s += b;
    }
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
}

TEST_CASE("box helpers") {
  const BoundingBox a{0, 0, 10, 10};
  const BoundingBox b{5, 0, 10, 10};
  CHECK(iou(a, a) == doctest::Approx(1.0));
  CHECK(iou(a, b) == doctest::Approx(50.0 / 150.0));
  CHECK(iou(a, BoundingBox{20, 20, 5, 5}) == 0.0);
  CHECK(a.center().isApprox(Vec2(5, 5)));
  CHECK(a.valid());
  CHECK_FALSE(BoundingBox{0, 0, 0, 1}.valid());
  const KinematicState k = KinematicState::from_stacked(v6(1, 2, 3, 4, 5, 6));
  CHECK(k.stacked() == v6(1, 2, 3, 4, 5, 6));
}

TEST_CASE("detector validation") {
  DetectorModel d;
  CHECK_NOTHROW(d.validate());
  d.obs_covariance = Mat4::Zero();
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d = DetectorModel{};
  d.clutter_density = 0.0;
  CHECK_THROWS_AS(d.validate(), ConfigError);
}
