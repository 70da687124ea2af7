#include "vbmot/vem.hpp"

#include "vbmot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vbmot {

namespace {

bool exists(const Existence& existence, std::size_t target) {
  return target == 0 || existence[target - 1];
}

Mat6 invert_spd(const Mat6& m) {
  Eigen::LLT<Mat6> llt(m);
  if (llt.info() != Eigen::Success) {
    llt.compute(0.5 * (m + m.transpose()) + kSpdJitter * Mat6::Identity());
    if (llt.info() != Eigen::Success) throw NumericError("precision matrix is singular");
  }
  return llt.solve(Mat6::Identity());
}

}  // namespace

double Responsibilities::max_abs_difference(const Responsibilities& other) const {
  double d = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i].size() == 0) continue;
    if (alpha[i].rows() != other.alpha[i].rows() || alpha[i].cols() != other.alpha[i].cols())
      return std::numeric_limits<double>::infinity();
    d = std::max(d, (alpha[i] - other.alpha[i]).cwiseAbs().maxCoeff());
  }
  return d;
}

Responsibilities e_z_step(const EpsilonTable& epsilons, const AssignmentPriors& priors, const Existence& existence) {
  const std::size_t targets = epsilons.targets();
  if (existence.size() + 1 != targets) throw std::invalid_argument("existence does not match epsilon table");
  if (priors.size() != epsilons.detectors()) throw std::invalid_argument("priors missing for some detector");

  Responsibilities r;
  r.alpha.resize(epsilons.detectors());
  r.flagged.resize(epsilons.detectors());
  std::vector<double> logw(targets);
  for (std::size_t i = 0; i < epsilons.detectors(); ++i) {
    const std::size_t kcount = epsilons.detections(i);
    if (static_cast<std::size_t>(priors[i].size()) != targets)
      throw std::invalid_argument("prior vector has wrong length");
    r.alpha[i] = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kcount), static_cast<Eigen::Index>(targets));
    r.flagged[i].assign(kcount, false);
    for (std::size_t k = 0; k < kcount; ++k) {
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t n = 0; n < targets; ++n) {
        const double a = priors[i](static_cast<Eigen::Index>(n));
        logw[n] = (exists(existence, n) && a > 0.0) ? epsilons.log_value(i, k, n) + std::log(a)
                                                    : -std::numeric_limits<double>::infinity();
        top = std::max(top, logw[n]);
      }
      if (!std::isfinite(top)) {
        r.alpha[i](static_cast<Eigen::Index>(k), 0) = 1.0;
        r.flagged[i][k] = true;
        continue;
      }
      double z = 0.0;
      for (std::size_t n = 0; n < targets; ++n) z += std::exp(logw[n] - top);
      for (std::size_t n = 0; n < targets; ++n)
        r.alpha[i](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n)) = std::exp(logw[n] - top) / z;
    }
  }
  return r;
}

GaussianBelief e_x_step(const GaussianBelief& prediction, const FrameDetections& detections,
                        const Responsibilities& responsibilities, const ModelParams& params, std::size_t target) {
  if (target == 0) throw std::invalid_argument("e_x_step: clutter has no kinematic state");
  Mat6 info = Mat6::Zero();
  Vec6 info_mean = Vec6::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (detections[i].empty()) continue;
    const DetectorModel& det = params.detectors.at(i);
    const Eigen::LLT<Mat4> sigma(det.obs_covariance);
    const Eigen::Matrix<double, 6, 4> pt_sinv = sigma.solve(det.projection).transpose();
    const Mat6 pt_sinv_p = pt_sinv * det.projection;
    for (std::size_t k = 0; k < detections[i].size(); ++k) {
      const double a = responsibilities.alpha[i](static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(target));
      if (a <= 0.0) continue;
      total += a;
      info += a * pt_sinv_p;
      info_mean += a * pt_sinv * (detections[i][k].box.as_vector() - det.offset);
    }
  }
  if (total <= 0.0) return prediction;

  const Mat6 prior_precision = invert_spd(prediction.covariance);
  GaussianBelief out;
  out.covariance = make_spd<6>(invert_spd(info + prior_precision));
  out.mean = out.covariance * (info_mean + prior_precision * prediction.mean);
  return out;
}

AssignmentPriors m_step_priors(const Responsibilities& responsibilities, const Existence& existence,
                               const AssignmentPriors& previous) {
  AssignmentPriors out(responsibilities.detectors());
  for (std::size_t i = 0; i < responsibilities.detectors(); ++i) {
    const Eigen::MatrixXd& a = responsibilities.alpha[i];
    if (a.rows() == 0) {
      out[i] = previous.at(i);
      continue;
    }
    Eigen::VectorXd mass = a.colwise().sum().transpose();
    for (Eigen::Index n = 1; n < mass.size(); ++n)
      if (!existence[static_cast<std::size_t>(n - 1)]) mass(n) = 0.0;
    out[i] = mass / mass.sum();
  }
  return out;
}

CovarianceEstimate m_step_sigma(std::size_t detector, const Responsibilities& responsibilities,
                                const std::vector<GaussianBelief>& beliefs, const Existence& existence,
                                const FrameDetections& detections, const ModelParams& params) {
  CovarianceEstimate est;
  const auto& dets = detections.at(detector);
  const Eigen::MatrixXd& alpha = responsibilities.alpha.at(detector);
  const std::size_t n_existing = static_cast<std::size_t>(std::count(existence.begin(), existence.end(), true));
  if (dets.empty() || n_existing == 0) return est;
  const DetectorModel& det = params.detectors.at(detector);

  bool any_positive = false;
  for (std::size_t k = 0; k < dets.size(); ++k) {
    for (std::size_t n = 0; n < beliefs.size(); ++n) {
      if (!existence[n]) continue;
      const double a = alpha(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n + 1));
      if (a <= 0.0) continue;
      any_positive = true;
      const Vec4 r = dets[k].box.as_vector() - project(det, beliefs[n].mean);
      est.value += a * (det.projection * beliefs[n].covariance * det.projection.transpose() + r * r.transpose());
    }
  }
  if (!any_positive) return est;
  est.value /= static_cast<double>(dets.size() * n_existing);
  est.value = 0.5 * (est.value + est.value.transpose());
  Eigen::SelfAdjointEigenSolver<Mat4> eig(est.value, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  est.accepted = hi > 0.0 && eig.eigenvalues().minCoeff() > 1e-9 * hi;
  return est;
}

Mat6 m_step_lambda(const GaussianBelief& previous, const GaussianBelief& current) {
  const Mat6& d = dynamics_matrix();
  const Vec6 r = current.mean - d * previous.mean;
  const Mat6 out = d * previous.covariance * d.transpose() + current.covariance + r * r.transpose();
  return 0.5 * (out + out.transpose());
}

AssignmentPriors prepare_priors(const AssignmentPriors& carried, const Existence& existence, std::size_t detectors,
                                double mix) {
  const std::size_t targets = existence.size() + 1;
  const double n_live = 1.0 + static_cast<double>(std::count(existence.begin(), existence.end(), true));
  AssignmentPriors out(detectors);
  for (std::size_t i = 0; i < detectors; ++i) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(targets));
    if (i < carried.size()) {
      const Eigen::Index m = std::min<Eigen::Index>(carried[i].size(), p.size());
      p.head(m) = carried[i].head(m);
    }
    Eigen::VectorXd uniform = Eigen::VectorXd::Zero(p.size());
    for (std::size_t n = 0; n < targets; ++n) {
      if (exists(existence, n)) {
        uniform(static_cast<Eigen::Index>(n)) = 1.0 / n_live;
      } else {
        p(static_cast<Eigen::Index>(n)) = 0.0;
      }
    }
    const double s = p.sum();
    p = s > 0.0 ? Eigen::VectorXd(p / s) : uniform;
    out[i] = (1.0 - mix) * p + mix * uniform;
  }
  return out;
}

FrameResult run_frame(const std::vector<Track>& tracks, const FrameDetections& detections, const ModelParams& params,
                      const AssignmentPriors& carried_priors) {
  if (detections.size() != params.detectors.size())
    throw std::invalid_argument("frame detections must be grouped per configured detector");
  const std::size_t n_tracks = tracks.size();
  Existence existence(n_tracks);
  std::vector<GaussianBelief> predicted(n_tracks);
  std::vector<AppearanceHistogram> refs(n_tracks);
  for (std::size_t n = 0; n < n_tracks; ++n) {
    existence[n] = tracks[n].exists;
    refs[n] = tracks[n].reference_appearance;
    predicted[n] = tracks[n].exists
                       ? predict_belief(tracks[n].belief, tracks[n].dynamics_covariance.value_or(params.dynamics_covariance))
                       : tracks[n].belief;
  }

  FrameResult result;
  AssignmentPriors priors = prepare_priors(carried_priors, existence, detections.size(), params.vem.prior_mix);
  std::vector<GaussianBelief> beliefs = predicted;

  std::size_t total_detections = 0;
  for (const auto& d : detections) total_detections += d.size();

  Responsibilities alpha;
  for (int it = 1; it <= std::max(1, params.vem.max_iterations); ++it) {
    const EpsilonTable eps = compute_epsilons(detections, beliefs, refs, params);
    Responsibilities next = e_z_step(eps, priors, existence);
    const double delta = it == 1 ? std::numeric_limits<double>::infinity() : next.max_abs_difference(alpha);
    alpha = std::move(next);
    for (std::size_t n = 0; n < n_tracks; ++n)
      if (existence[n]) beliefs[n] = e_x_step(predicted[n], detections, alpha, params, n + 1);
    priors = m_step_priors(alpha, existence, priors);
    result.iterations_used = it;
    if (total_detections == 0 || delta < params.vem.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.frame_priors = priors;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    if (!detections[i].empty()) continue;
    result.frame_priors[i].setZero();
    result.frame_priors[i](0) = 1.0;
    // A detector that saw nothing keeps what it carried in.
    priors[i] = i < carried_priors.size() && carried_priors[i].size() > 0
                    ? prepare_priors(carried_priors, existence, detections.size(), 0.0)[i]
                    : priors[i];
  }
  result.assignment_priors = std::move(priors);

  for (std::size_t i = 0; i < detections.size(); ++i)
    result.obs_covariance_estimates.push_back(m_step_sigma(i, alpha, beliefs, existence, detections, params));
  for (std::size_t n = 0; n < n_tracks; ++n)
    result.dynamics_covariance_estimates.push_back(m_step_lambda(tracks[n].belief, beliefs[n]));

  result.beliefs = std::move(beliefs);
  result.responsibilities = std::move(alpha);
  return result;
}

}  // namespace vbmot
