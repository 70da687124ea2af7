#include "vbmot/tracker.hpp"

#include "vbmot/visibility.hpp"

#include <stdexcept>
#include <string>

namespace vbmot {

Tracker::Tracker(ModelParams params) : params_(std::move(params)), history_(params_.birth.window) {
  if (params_.detectors.empty()) throw std::invalid_argument("tracker needs at least one detector");
}

FrameSummary Tracker::step(int frame, const std::vector<Detection>& detections) {
  if (frame <= last_frame_) throw std::invalid_argument("frames must be strictly increasing");
  last_frame_ = frame;

  FrameDetections grouped(params_.detectors.size());
  for (const Detection& d : detections) {
    if (d.detector_id < 1 || static_cast<std::size_t>(d.detector_id) > grouped.size())
      throw std::invalid_argument("frame " + std::to_string(frame) + ": detector_id " +
                                  std::to_string(d.detector_id) + " is not configured");
    grouped[static_cast<std::size_t>(d.detector_id - 1)].push_back(d);
  }

  FrameSummary summary;
  summary.frame = frame;
  summary.detections = detections.size();

  const FrameResult r = run_frame(tracks_, grouped, params_, priors_);
  summary.iterations_used = r.iterations_used;
  summary.converged = r.converged;
  for (std::size_t n = 0; n < tracks_.size(); ++n) tracks_[n].belief = r.beliefs[n];
  priors_ = r.assignment_priors;
  if (params_.vem.learn_obs_covariance)
    for (std::size_t i = 0; i < grouped.size(); ++i)
      if (r.obs_covariance_estimates[i].accepted) params_.detectors[i].obs_covariance = r.obs_covariance_estimates[i].value;
  if (params_.vem.learn_dynamics_covariance)
    for (std::size_t n = 0; n < tracks_.size(); ++n)
      if (tracks_[n].exists) tracks_[n].dynamics_covariance = make_spd<6>(r.dynamics_covariance_estimates[n]);

  for (std::size_t i = 0; i < grouped.size(); ++i) {
    std::vector<double> clutter(grouped[i].size());
    for (std::size_t k = 0; k < clutter.size(); ++k)
      clutter[k] = r.responsibilities.alpha[i](static_cast<Eigen::Index>(k), 0);
    history_.push(frame, grouped[i], clutter, params_.birth.clutter_threshold);
  }

  Existence existence(tracks_.size());
  for (std::size_t n = 0; n < tracks_.size(); ++n) existence[n] = tracks_[n].exists;
  for (std::size_t n = 0; n < tracks_.size(); ++n) {
    if (!tracks_[n].exists) continue;
    const double nu = visibility_observation(n + 1, r.frame_priors, existence);
    const VisibilityParams& v = params_.visibility;
    tracks_[n].visibility_posterior =
        visibility_update({tracks_[n].visibility_posterior}, nu, v.pi_v, v.lambda, v.orientation).posterior_visible;
  }

  BirthOutcome births = scan_and_spawn(history_, tracks_, params_, next_id_);
  summary.capacity_skipped = births.capacity_skipped;
  for (Track& t : births.born) {
    t.birth_frame = frame;
    summary.born.push_back(t.id);
    tracks_.push_back(std::move(t));
  }

  for (const Track& t : tracks_) {
    if (!t.exists || !is_reported(t, params_.visibility.report_threshold)) continue;
    summary.reported.push_back(
        TrackRow{frame, t.id, KinematicState::from_stacked(t.belief.mean).box, t.visibility_posterior});
  }
  return summary;
}

std::vector<TrackRow> track_sequence(const ModelParams& params, const std::vector<std::vector<Detection>>& frames,
                                     std::vector<FrameSummary>* summaries) {
  Tracker tracker(params);
  std::vector<TrackRow> rows;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    FrameSummary s = tracker.step(static_cast<int>(t + 1), frames[t]);
    rows.insert(rows.end(), s.reported.begin(), s.reported.end());
    if (summaries) summaries->push_back(std::move(s));
  }
  return rows;
}

}  // namespace vbmot
