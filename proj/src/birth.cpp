#include "vbmot/birth.hpp"

#include "vbmot/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace vbmot {

namespace {

double log_gaussian(const Vec4& r, const Mat4& cov) {
  Eigen::LLT<Mat4> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericError("innovation covariance not positive definite");
  const Vec4 z = llt.matrixL().solve(r);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * (4.0 * std::log(2.0 * std::numbers::pi) + log_det + z.squaredNorm());
}

}  // namespace

bool CandidateSequence::valid() const {
  if (detections.empty()) return false;
  for (std::size_t l = 1; l < detections.size(); ++l) {
    if (detections[l].detector_id != detections[0].detector_id) return false;
    if (detections[l].frame != detections[l - 1].frame + 1) return false;
  }
  return true;
}

double log_tau0(const CandidateSequence& candidate, const ModelParams& params) {
  const DetectorModel& det = params.detector(candidate.detector_id());
  const Mat6& d = dynamics_matrix();
  Vec6 mean = params.birth.flat_mean;
  Mat6 cov = params.birth.flat_covariance;
  double log_p = 0.0;
  for (std::size_t l = 0; l < candidate.detections.size(); ++l) {
    if (l > 0) {
      mean = d * mean;
      cov = d * cov * d.transpose() + params.dynamics_covariance;
    }
    const Mat4 s = det.projection * cov * det.projection.transpose() + det.obs_covariance;
    const Vec4 r = candidate.detections[l].box.as_vector() - project(det, mean);
    log_p += log_gaussian(r, s);
    const Eigen::Matrix<double, 6, 4> gain = s.llt().solve(det.projection * cov).transpose();
    mean += gain * r;
    const Mat6 ikp = Mat6::Identity() - gain * det.projection;
    cov = ikp * cov * ikp.transpose() + gain * det.obs_covariance * gain.transpose();
  }
  return log_p;
}

double tau0(const CandidateSequence& candidate, const ModelParams& params) {
  return std::exp(log_tau0(candidate, params));
}

double log_tau1(const CandidateSequence& candidate, const ModelParams& params) {
  const DetectorModel& det = params.detector(candidate.detector_id());
  return static_cast<double>(candidate.detections.size()) * std::log(det.clutter_density);
}

double tau1(const CandidateSequence& candidate, const ModelParams& params) {
  return std::exp(log_tau1(candidate, params));
}

void ClutterHistory::push(int frame, const std::vector<Detection>& detections,
                          const std::vector<double>& clutter_responsibility, double threshold) {
  if (!frames_.empty() && frames_.back().frame == frame) {
    // Same frame pushed per detector: extend it.
  } else {
    frames_.push_back(Frame{frame, {}});
  }
  Frame& f = frames_.back();
  for (std::size_t k = 0; k < detections.size(); ++k) {
    if (clutter_responsibility.at(k) < threshold) continue;
    f.entries.push_back(ClutterEntry{detections[k], clutter_responsibility[k], next_key_++});
  }
  while (!frames_.empty() && frames_.front().frame < frame - window_) frames_.pop_front();
}

void ClutterHistory::consume(std::uint64_t key) {
  for (Frame& f : frames_)
    std::erase_if(f.entries, [key](const ClutterEntry& e) { return e.key == key; });
}

BoundingBox state_box_from_observation(const DetectorModel& detector, const BoundingBox& y) {
  const Mat4 a = detector.projection.leftCols<4>();
  const Vec4 box = a.partialPivLu().solve(y.as_vector() - detector.offset);
  return BoundingBox::from_vector(box);
}

std::vector<BirthCandidate> enumerate_candidates(const ClutterHistory& history, const ModelParams& params) {
  std::vector<BirthCandidate> out;
  const auto& frames = history.frames();
  const std::size_t span = static_cast<std::size_t>(history.window()) + 1;
  if (frames.size() < span) return out;
  // The last span frames must be consecutive.
  const std::size_t first = frames.size() - span;
  for (std::size_t f = first + 1; f < frames.size(); ++f)
    if (frames[f].frame != frames[f - 1].frame + 1) return out;

  for (const ClutterEntry& newest : frames.back().entries) {
    BirthCandidate c;
    c.sequence.detections.push_back(newest.detection);
    c.keys.push_back(newest.key);
    const ClutterEntry* cur = &newest;
    bool broken = false;
    for (std::size_t f = frames.size() - 1; f-- > first;) {
      const Vec2 at = cur->detection.box.center();
      const double gate = params.birth.gate_factor * cur->detection.box.diagonal();
      const ClutterEntry* best = nullptr;
      double best_d = std::numeric_limits<double>::infinity();
      for (const ClutterEntry& e : frames[f].entries) {
        if (e.detection.detector_id != newest.detection.detector_id) continue;
        const double dist = (e.detection.box.center() - at).norm();
        if (dist <= gate && dist < best_d) {
          best_d = dist;
          best = &e;
        }
      }
      if (best == nullptr) {
        broken = true;
        break;
      }
      c.sequence.detections.insert(c.sequence.detections.begin(), best->detection);
      c.keys.push_back(best->key);
      cur = best;
    }
    if (broken || !c.sequence.valid()) continue;
    c.log_ratio = log_tau0(c.sequence, params) - log_tau1(c.sequence, params);
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const BirthCandidate& a, const BirthCandidate& b) { return a.log_ratio > b.log_ratio; });
  return out;
}

BirthOutcome scan_and_spawn(ClutterHistory& history, const std::vector<Track>& tracks, const ModelParams& params,
                            int& next_track_id) {
  BirthOutcome outcome;
  std::set<std::uint64_t> used;
  for (const BirthCandidate& c : enumerate_candidates(history, params)) {
    if (!(c.log_ratio > 0.0)) break;
    if (std::any_of(c.keys.begin(), c.keys.end(), [&](std::uint64_t k) { return used.contains(k); })) continue;
    if (tracks.size() + outcome.born.size() >= static_cast<std::size_t>(params.max_tracks)) {
      ++outcome.capacity_skipped;
      continue;
    }
    const Detection& newest = c.sequence.detections.back();
    const DetectorModel& det = params.detector(newest.detector_id);
    Track t;
    t.id = next_track_id++;
    t.exists = true;
    t.belief.mean.head<4>() = state_box_from_observation(det, newest.box).as_vector();
    t.belief.mean.tail<2>().setZero();
    t.belief.covariance = params.birth.birth_covariance;
    t.reference_appearance = newest.appearance;
    t.visibility_posterior = 1.0;
    t.birth_frame = newest.frame;
    outcome.born.push_back(std::move(t));
    used.insert(c.keys.begin(), c.keys.end());
  }
  for (std::uint64_t k : used) history.consume(k);
  return outcome;
}

}  // namespace vbmot
