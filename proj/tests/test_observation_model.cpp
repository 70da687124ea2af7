#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "vbmot/observation_model.hpp"

#include <cmath>
#include <numbers>

using namespace vbmot;

namespace {
const double kTwoPiSq = std::pow(2.0 * std::numbers::pi, -2.0);
}

TEST_CASE("localization likelihood at the mean and at Mahalanobis distance 2") {
  DetectorModel d;
  Vec6 x;
  x << 10, 20, 30, 40, 1, 1;
  CHECK(localization_likelihood(d, Vec4(10, 20, 30, 40), x) == doctest::Approx(kTwoPiSq).epsilon(1e-12));
  CHECK(localization_likelihood(d, Vec4(12, 20, 30, 40), x) == doctest::Approx(kTwoPiSq * std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("localization likelihood slices integrate like the matching 1-D marginal") {
  // Along axis j the 4-D density equals the conditional slice; integrating
  // over y_j must give the 3-D marginal density of the remaining components.
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    DetectorModel d;
    d.obs_covariance = testing::random_spd4(rng, 4.0);
    Vec6 x = Vec6::Zero();
    x.head<4>() << 5, 6, 7, 8;
    Vec4 y(6, 5, 9, 7);
    const int j = trial % 4;
    const double sd = std::sqrt(d.obs_covariance(j, j));
    auto f = [&](double v) {
      Vec4 yy = y;
      yy(j) = v;
      return localization_likelihood(d, yy, x);
    };
    const double integral = oracle::simpson(f, x(j) - 12 * sd - 20, x(j) + 12 * sd + 20, 20000);
    int idx[3], c = 0;
    for (int k = 0; k < 4; ++k)
      if (k != j) idx[c++] = k;
    Eigen::VectorXd y3(3), m3(3);
    Eigen::MatrixXd c3(3, 3);
    for (int a = 0; a < 3; ++a) {
      y3(a) = y(idx[a]);
      m3(a) = x(idx[a]);
      for (int b = 0; b < 3; ++b) c3(a, b) = d.obs_covariance(idx[a], idx[b]);
    }
    CHECK(integral == doctest::Approx(std::exp(oracle::log_gaussian(y3, m3, c3))).epsilon(1e-8));
  }
}

TEST_CASE("epsilon decreases with Mahalanobis distance") {
  auto params = testing::simple_params();
  GaussianBelief b;
  b.mean << 100, 100, 50, 80, 0, 0;
  const auto ref = AppearanceHistogram::uniform(4);
  double prev = std::numeric_limits<double>::infinity();
  for (double dx = 0; dx < 20; dx += 1.0) {
    const double e = epsilon(params.detectors[0], testing::detection(1, 100 + dx, 100, 50, 80, 1), b, ref, params);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("bhattacharyya distance examples") {
  const auto a = AppearanceHistogram::from_weights({0.5, 0.5});
  const auto b = AppearanceHistogram::from_weights({1.0, 0.0});
  CHECK(bhattacharyya_distance(a, a) == doctest::Approx(0.0));
  CHECK(bhattacharyya_distance(b, AppearanceHistogram::from_weights({0.0, 1.0})) == doctest::Approx(1.0));
  CHECK(bhattacharyya_distance(a, b) == doctest::Approx(std::sqrt(1.0 - std::sqrt(0.5))).epsilon(1e-12));
  CHECK(bhattacharyya_distance(a, b) == doctest::Approx(0.5412).epsilon(1e-4));
  CHECK_THROWS_AS(bhattacharyya_distance(a, AppearanceHistogram::uniform(3)), std::invalid_argument);
}

TEST_CASE("bhattacharyya distance is symmetric, bounded, zero on equal inputs") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const auto a = testing::random_histogram(rng, 16);
    const auto b = testing::random_histogram(rng, 16);
    const double d = bhattacharyya_distance(a, b);
    CHECK(d == bhattacharyya_distance(b, a));
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(bhattacharyya_distance(a, a) < 1e-6);
  }
}

TEST_CASE("appearance likelihood examples") {
  const auto a = AppearanceHistogram::from_weights({0.5, 0.5});
  const auto b = AppearanceHistogram::from_weights({1.0, 0.0});
  CHECK(appearance_likelihood(a, a, 10.0, 0.25) == doctest::Approx(4.0));
  CHECK(appearance_likelihood(a, b, 0.0, 0.25) == doctest::Approx(4.0));
  const double d = std::sqrt(1.0 - std::sqrt(0.5));
  CHECK(appearance_likelihood(a, b, 2.0, 0.5) == doctest::Approx(std::exp(-2.0 * d) / 0.5).epsilon(1e-12));
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const double v = appearance_likelihood(testing::random_histogram(rng, 8), testing::random_histogram(rng, 8), 10.0, 0.3);
    CHECK(v > 0.0);
    CHECK(v <= 1.0 / 0.3 + 1e-12);
  }
}

TEST_CASE("W_lambda Monte Carlo estimate") {
  SUBCASE("lambda 0 gives the simplex volume") {
    for (std::size_t bins : {2u, 4u, 8u}) {
      const auto est = estimate_w_lambda(0.0, AppearanceHistogram::uniform(bins), 20000, 1);
      CHECK(est.value == doctest::Approx(simplex_volume(bins)).epsilon(1e-12));
    }
    CHECK(simplex_volume(4) == doctest::Approx(1.0 / 6.0));
  }
  SUBCASE("two bins match 1-D quadrature") {
    for (double q : {0.5, 0.2, 0.9}) {
      const auto ref = AppearanceHistogram::from_weights({q, 1.0 - q});
      const auto est = estimate_w_lambda(1.0, ref, 200000, 77);
      const double truth = oracle::w_lambda_two_bins(1.0, q);
      CHECK(std::abs(est.value - truth) < 4.0 * est.std_error + 1e-9);
      CHECK(est.std_error < 1e-3);
    }
  }
  SUBCASE("invariant to permuting the reference bins") {
    std::mt19937_64 rng(12);
    const auto ref = testing::random_histogram(rng, 6);
    std::vector<double> rev(ref.bins().rbegin(), ref.bins().rend());
    const auto a = estimate_w_lambda(10.0, ref, 50000, 3);
    const auto b = estimate_w_lambda(10.0, AppearanceHistogram::from_weights(rev), 50000, 4);
    CHECK(std::abs(a.value - b.value) < 3.0 * std::hypot(a.std_error, b.std_error));
  }
  SUBCASE("deterministic and cached") {
    CHECK(estimate_w_lambda(10.0, 16, 5000, 9) == estimate_w_lambda(10.0, 16, 5000, 9));
    CHECK(cached_w_lambda(10.0, 16) == estimate_w_lambda(10.0, 16, kDefaultWLambdaSamples, kDefaultWLambdaSeed));
  }
}

TEST_CASE("epsilon case split") {
  auto params = testing::simple_params();
  params.detectors[0].obs_covariance = Mat4::Identity();
  const DetectorModel& det = params.detectors[0];
  CHECK(epsilon_clutter(det) == doctest::Approx(1e-6));

  GaussianBelief b;
  b.mean << 10, 10, 20, 20, 0, 0;
  b.covariance = Mat6::Zero();
  CHECK(exp_trace_factor(det, b.covariance) == doctest::Approx(1.0));
  const auto ref = AppearanceHistogram::uniform(4);
  const auto det_obs = testing::detection(1, 11, 10, 20, 20, 1, ref);
  const double plain = localization_likelihood(det, det_obs.box.as_vector(), b.mean) *
                       appearance_likelihood(ref, ref, params.lambda_appearance, params.w_lambda);
  CHECK(epsilon(det, det_obs, b, ref, params) == doctest::Approx(plain).epsilon(1e-12));

  for (double c : {0.1, 0.5, 2.0}) CHECK(exp_trace_factor(det, Mat6::Identity() * c) == doctest::Approx(std::exp(-2.0 * c)));
}

TEST_CASE("epsilon table stores every target and clutter") {
  auto params = testing::simple_params();
  FrameDetections dets(1);
  dets[0].push_back(testing::detection(1, 10, 10, 20, 20, 1));
  dets[0].push_back(testing::detection(1, 200, 10, 20, 20, 1));
  std::vector<GaussianBelief> beliefs(2);
  beliefs[0].mean << 10, 10, 20, 20, 0, 0;
  beliefs[1].mean << 200, 10, 20, 20, 0, 0;
  std::vector<AppearanceHistogram> refs(2, AppearanceHistogram::uniform(4));
  const EpsilonTable t = compute_epsilons(dets, beliefs, refs, params);
  CHECK(t.detectors() == 1);
  CHECK(t.detections(0) == 2);
  CHECK(t.targets() == 3);
  CHECK(t.value(0, 0, 0) == doctest::Approx(epsilon_clutter(params.detectors[0])));
  CHECK(t.value(0, 0, 1) > t.value(0, 0, 2));
  CHECK(t.value(0, 1, 2) > t.value(0, 1, 1));
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t n = 0; n < 3; ++n) {
      CHECK(t.value(0, k, n) >= 0.0);
      CHECK(std::isfinite(t.value(0, k, n)));
    }
}
