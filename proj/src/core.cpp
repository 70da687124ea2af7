#include "vbmot/core.hpp"

#include "vbmot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vbmot {

bool BoundingBox::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) &&
         w > 0.0 && h > 0.0;
}

double BoundingBox::diagonal() const { return std::hypot(w, h); }

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Vec6 KinematicState::stacked() const {
  Vec6 x;
  x << box.x, box.y, box.w, box.h, velocity(0), velocity(1);
  return x;
}

KinematicState KinematicState::from_stacked(const Vec6& x) {
  return {BoundingBox{x(0), x(1), x(2), x(3)}, Vec2{x(4), x(5)}};
}

AppearanceHistogram AppearanceHistogram::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("histogram has no bins");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("histogram bin negative or not finite");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("histogram has zero mass");
  for (double& w : weights) w /= total;
  AppearanceHistogram h;
  h.bins_ = std::move(weights);
  return h;
}

AppearanceHistogram AppearanceHistogram::uniform(std::size_t bins) {
  return from_weights(std::vector<double>(bins, 1.0));
}

Mat46 DetectorModel::identity_projection() {
  Mat46 p = Mat46::Zero();
  p.leftCols<4>().setIdentity();
  return p;
}

DetectorModel DetectorModel::affine(const Vec4& scale, const Vec4& offset, const Mat4& obs_covariance) {
  DetectorModel d;
  d.projection = scale.asDiagonal() * identity_projection();
  d.offset = offset;
  d.obs_covariance = obs_covariance;
  return d;
}

void DetectorModel::validate() const {
  if (!obs_covariance.allFinite() || !obs_covariance.isApprox(obs_covariance.transpose(), 1e-12))
    throw ConfigError("detector covariance must be finite and symmetric");
  Eigen::LLT<Mat4> llt(obs_covariance);
  if (llt.info() != Eigen::Success) throw ConfigError("detector covariance is not positive definite");
  if (!(clutter_density > 0.0) || !(appearance_clutter_density > 0.0))
    throw ConfigError("clutter densities must be positive");
  if (!projection.allFinite() || !offset.allFinite()) throw ConfigError("detector projection not finite");
}

const Mat6& dynamics_matrix() {
  static const Mat6 d = [] {
    Mat6 m = Mat6::Identity();
    m(0, 4) = 1.0;
    m(1, 5) = 1.0;
    return m;
  }();
  return d;
}

Vec6 apply_dynamics(const Vec6& state) { return dynamics_matrix() * state; }

Vec4 project(const DetectorModel& detector, const Vec6& state) {
  return detector.projection * state + detector.offset;
}

template <int N>
Eigen::Matrix<double, N, N> make_spd(const Eigen::Matrix<double, N, N>& m) {
  using M = Eigen::Matrix<double, N, N>;
  if (!m.allFinite()) throw NumericError("covariance has non-finite entries");
  M s = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<M> eig(s, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() >= kSpdEigenFloor) return s;
  s += kSpdJitter * M::Identity();
  Eigen::SelfAdjointEigenSolver<M> again(s, Eigen::EigenvaluesOnly);
  if (!(again.eigenvalues().minCoeff() > 0.0))
    throw NumericError("covariance not positive definite after jitter");
  return s;
}

template Mat4 make_spd<4>(const Mat4&);
template Mat6 make_spd<6>(const Mat6&);

GaussianBelief predict_belief(const GaussianBelief& prev, const Mat6& dynamics_cov) {
  const Mat6& d = dynamics_matrix();
  GaussianBelief out;
  out.mean = d * prev.mean;
  out.covariance = make_spd<6>(d * prev.covariance * d.transpose() + dynamics_cov);
  return out;
}

}  // namespace vbmot
