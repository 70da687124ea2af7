#pragma once

// Likelihood terms of the observation model and the composite epsilon used
// by the assignment E-step.

#include "vbmot/core.hpp"
#include "vbmot/params.hpp"

#include <cstdint>
#include <vector>

namespace vbmot {

/// Detections of one frame, grouped by detector index (0-based).
using FrameDetections = std::vector<std::vector<Detection>>;

double log_localization_likelihood(const DetectorModel& detector, const Vec4& y, const Vec6& state);
/// g(y; P x + o, Sigma).
double localization_likelihood(const DetectorModel& detector, const Vec4& y, const Vec6& state);

/// sqrt(1 - sum_k sqrt(a_k b_k)) clamped to [0, 1].
/// Throws std::invalid_argument when the dimensions differ.
double bhattacharyya_distance(const AppearanceHistogram& a, const AppearanceHistogram& b);

double log_appearance_likelihood(const AppearanceHistogram& h, const AppearanceHistogram& ref,
                                 double lambda, double w_lambda);
/// exp(-lambda d_B(h, ref)) / W_lambda.
double appearance_likelihood(const AppearanceHistogram& h, const AppearanceHistogram& ref,
                             double lambda, double w_lambda);

/// Lebesgue volume of the (B-1)-simplex in its first B-1 coordinates: 1/(B-1)!.
double simplex_volume(std::size_t bins);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Integral of exp(-lambda d_B(h, ref)) over the simplex by uniform Dirichlet
/// sampling. Deterministic given the seed.
MonteCarloEstimate estimate_w_lambda(double lambda, const AppearanceHistogram& ref, std::size_t samples,
                                     std::uint64_t seed);
/// Same, against the uniform reference histogram.
double estimate_w_lambda(double lambda, std::size_t bins, std::size_t samples, std::uint64_t seed);

inline constexpr std::size_t kDefaultWLambdaSamples = 100000;
inline constexpr std::uint64_t kDefaultWLambdaSeed = 0x5eed'cafe;

/// Write-once cache keyed by (lambda, bins) using the default sample count and seed.
double cached_w_lambda(double lambda, std::size_t bins);

/// exp(-1/2 tr(P^T Sigma^-1 P Gamma)).
double exp_trace_factor(const DetectorModel& detector, const Mat6& covariance);

double log_epsilon(const DetectorModel& detector, const Detection& detection, const GaussianBelief& belief,
                   const AppearanceHistogram& ref, const ModelParams& params);
double epsilon(const DetectorModel& detector, const Detection& detection, const GaussianBelief& belief,
               const AppearanceHistogram& ref, const ModelParams& params);
/// u(y) u(h).
double epsilon_clutter(const DetectorModel& detector);

/// epsilon^i_{kn} for every detector i, detection k and target n in {0..N};
/// stored as logs, target 0 is clutter.
class EpsilonTable {
 public:
  EpsilonTable() = default;
  EpsilonTable(const std::vector<std::size_t>& detections_per_detector, std::size_t targets);

  std::size_t detectors() const { return log_values_.size(); }
  std::size_t detections(std::size_t i) const { return static_cast<std::size_t>(log_values_[i].rows()); }
  /// Number of targets including clutter (N + 1).
  std::size_t targets() const { return targets_; }

  double log_value(std::size_t i, std::size_t k, std::size_t n) const { return log_values_[i](k, n); }
  double value(std::size_t i, std::size_t k, std::size_t n) const;
  void set_log(std::size_t i, std::size_t k, std::size_t n, double v) { log_values_[i](k, n) = v; }
  void set(std::size_t i, std::size_t k, std::size_t n, double v);

 private:
  std::vector<Eigen::MatrixXd> log_values_;
  std::size_t targets_ = 1;
};

/// Fills the table at the given beliefs. `beliefs` and `references` are
/// indexed by track slot (target n = slot + 1).
EpsilonTable compute_epsilons(const FrameDetections& detections, const std::vector<GaussianBelief>& beliefs,
                              const std::vector<AppearanceHistogram>& references, const ModelParams& params);

}  // namespace vbmot
