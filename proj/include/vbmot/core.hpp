#pragma once

// Domain types shared by the tracker, simulator and metrics.
//
// Boxes are top-left + width/height in pixels. A kinematic state is the
// stacked vector (x, y, w, h, vx, vy); one frame is one time step.

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace vbmot {

using Vec2 = Eigen::Matrix<double, 2, 1>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat46 = Eigen::Matrix<double, 4, 6>;

struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;

  bool valid() const;
  Vec4 as_vector() const { return {x, y, w, h}; }
  static BoundingBox from_vector(const Vec4& v) { return {v(0), v(1), v(2), v(3)}; }
  Vec2 center() const { return {x + 0.5 * w, y + 0.5 * h}; }
  double diagonal() const;
};

double iou(const BoundingBox& a, const BoundingBox& b);

struct KinematicState {
  BoundingBox box;
  Vec2 velocity = Vec2::Zero();

  Vec6 stacked() const;
  static KinematicState from_stacked(const Vec6& x);
};

struct GaussianBelief {
  Vec6 mean = Vec6::Zero();
  Mat6 covariance = Mat6::Identity();
};

/// Normalized histogram on the probability simplex.
class AppearanceHistogram {
 public:
  AppearanceHistogram() = default;

  /// Normalizes non-negative weights; throws std::invalid_argument on
  /// negative, non-finite or all-zero input.
  static AppearanceHistogram from_weights(std::vector<double> weights);
  static AppearanceHistogram uniform(std::size_t bins);

  std::span<const double> bins() const { return bins_; }
  std::size_t size() const { return bins_.size(); }
  bool empty() const { return bins_.empty(); }
  double operator[](std::size_t i) const { return bins_[i]; }

  friend bool operator==(const AppearanceHistogram&, const AppearanceHistogram&) = default;

 private:
  std::vector<double> bins_;
};

/// One observation o = (y, h) from detector `detector_id` (1-based).
struct Detection {
  int detector_id = 1;
  BoundingBox box;
  AppearanceHistogram appearance;
  int frame = 0;
};

struct Track {
  int id = 0;
  bool exists = true;
  GaussianBelief belief;
  AppearanceHistogram reference_appearance;
  double visibility_posterior = 1.0;
  int birth_frame = 0;
  /// Per-track dynamics covariance; the shared one is used when empty.
  std::optional<Mat6> dynamics_covariance;
};

/// Observation model of one detector: y ~ N(P x + offset, obs_covariance).
struct DetectorModel {
  Mat46 projection = identity_projection();
  Vec4 offset = Vec4::Zero();
  Mat4 obs_covariance = Mat4::Identity();
  double clutter_density = 1e-6;             // u(y)
  double appearance_clutter_density = 1.0;   // u(h)

  static Mat46 identity_projection();
  /// Body-to-part affine: diag(scale) * [I4 0], plus offset.
  static DetectorModel affine(const Vec4& scale, const Vec4& offset, const Mat4& obs_covariance);

  /// Throws ConfigError unless the covariance is SPD and densities are positive.
  void validate() const;
};

/// Constant-velocity transition: position += velocity.
const Mat6& dynamics_matrix();

Vec6 apply_dynamics(const Vec6& state);
Vec4 project(const DetectorModel& detector, const Vec6& state);

/// D Gamma D^T + Lambda, kept SPD.
GaussianBelief predict_belief(const GaussianBelief& prev, const Mat6& dynamics_cov);

/// Symmetrizes and adds 1e-9 I when the smallest eigenvalue is below 1e-12.
/// Throws NumericError if the result is still not SPD.
template <int N>
Eigen::Matrix<double, N, N> make_spd(const Eigen::Matrix<double, N, N>& m);

inline constexpr double kSpdEigenFloor = 1e-12;
inline constexpr double kSpdJitter = 1e-9;

}  // namespace vbmot
