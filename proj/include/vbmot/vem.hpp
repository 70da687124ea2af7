#pragma once

// Per-frame variational EM: assignment E-step, kinematic E-step and the
// assignment-prior M-step, iterated to convergence.

#include "vbmot/core.hpp"
#include "vbmot/observation_model.hpp"
#include "vbmot/params.hpp"

#include <optional>
#include <vector>

namespace vbmot {

/// a^i_n per detector i, over targets n = 0 (clutter) .. N.
using AssignmentPriors = std::vector<Eigen::VectorXd>;

/// Existence flags of the track slots 1..N (clutter always exists).
using Existence = std::vector<bool>;

struct Responsibilities {
  /// alpha[i](k, n): detection k of detector i, target n (0 = clutter).
  std::vector<Eigen::MatrixXd> alpha;
  /// Detections whose every epsilon * prior vanished; their mass went to clutter.
  std::vector<std::vector<bool>> flagged;

  std::size_t detectors() const { return alpha.size(); }
  double max_abs_difference(const Responsibilities& other) const;
};

Responsibilities e_z_step(const EpsilonTable& epsilons, const AssignmentPriors& priors, const Existence& existence);

/// Information-form update of track `target` (>= 1) from its prediction.
/// With zero total responsibility the prediction is returned unchanged.
GaussianBelief e_x_step(const GaussianBelief& prediction, const FrameDetections& detections,
                        const Responsibilities& responsibilities, const ModelParams& params, std::size_t target);

/// Detectors without detections keep their entry from `previous`.
AssignmentPriors m_step_priors(const Responsibilities& responsibilities, const Existence& existence,
                               const AssignmentPriors& previous);

struct CovarianceEstimate {
  Mat4 value = Mat4::Zero();
  bool accepted = false;
};

/// Instantaneous observation-covariance estimate for detector index `detector`
/// (0-based). Rejected when no responsibility is positive or the estimate is
/// rank deficient.
CovarianceEstimate m_step_sigma(std::size_t detector, const Responsibilities& responsibilities,
                                const std::vector<GaussianBelief>& beliefs, const Existence& existence,
                                const FrameDetections& detections, const ModelParams& params);

/// D Gamma_{t-1} D^T + Gamma_t + (mu_t - D mu_{t-1})(mu_t - D mu_{t-1})^T.
Mat6 m_step_lambda(const GaussianBelief& previous, const GaussianBelief& current);

/// Renormalizes carried priors over the current existence set and mixes in
/// a uniform distribution with weight `mix`.
AssignmentPriors prepare_priors(const AssignmentPriors& carried, const Existence& existence,
                                std::size_t detectors, double mix);

struct FrameResult {
  std::vector<GaussianBelief> beliefs;       // per track slot
  Responsibilities responsibilities;
  AssignmentPriors assignment_priors;        // carried to the next frame
  AssignmentPriors frame_priors;             // this frame only; zero track mass for empty detectors
  int iterations_used = 0;
  bool converged = false;
  std::vector<CovarianceEstimate> obs_covariance_estimates;  // per detector
  std::vector<Mat6> dynamics_covariance_estimates;           // per track slot
};

/// One tracking step: predict, iterate E-Z / E-X / M until max |delta alpha|
/// drops below the tolerance or the iteration cap is reached.
FrameResult run_frame(const std::vector<Track>& tracks, const FrameDetections& detections,
                      const ModelParams& params, const AssignmentPriors& carried_priors);

}  // namespace vbmot
