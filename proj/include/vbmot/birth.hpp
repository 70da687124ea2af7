#pragma once

// Track birth: look for clutter-assigned detections that chain into a
// coherent trajectory over L+1 frames and test "new target" (tau0, a
// Gaussian marginal) against "clutter" (tau1, a product of uniforms).

#include "vbmot/core.hpp"
#include "vbmot/params.hpp"

#include <cstdint>
#include <deque>
#include <vector>

namespace vbmot {

/// L+1 detections of one detector on consecutive frames, oldest first.
struct CandidateSequence {
  std::vector<Detection> detections;

  int detector_id() const { return detections.front().detector_id; }
  /// Non-empty, single detector, strictly consecutive frames.
  bool valid() const;
};

double log_tau0(const CandidateSequence& candidate, const ModelParams& params);
/// Marginal density of the sequence under a flat Gaussian start propagated
/// through the dynamics and observed through the candidate's detector.
double tau0(const CandidateSequence& candidate, const ModelParams& params);

double log_tau1(const CandidateSequence& candidate, const ModelParams& params);
/// prod_l u(y_l).
double tau1(const CandidateSequence& candidate, const ModelParams& params);

struct ClutterEntry {
  Detection detection;
  double clutter_responsibility = 1.0;
  std::uint64_t key = 0;
};

/// Clutter-assigned detections of the most recent L+1 frames.
class ClutterHistory {
 public:
  explicit ClutterHistory(int window = 2) : window_(window) {}

  /// Appends one frame; entries below `threshold` are dropped. Frames older
  /// than the window fall off.
  void push(int frame, const std::vector<Detection>& detections, const std::vector<double>& clutter_responsibility,
            double threshold);
  void consume(std::uint64_t key);
  void clear() { frames_.clear(); }

  struct Frame {
    int frame = 0;
    std::vector<ClutterEntry> entries;
  };
  const std::deque<Frame>& frames() const { return frames_; }
  int window() const { return window_; }

 private:
  int window_;
  std::uint64_t next_key_ = 1;
  std::deque<Frame> frames_;
};

struct BirthCandidate {
  CandidateSequence sequence;
  std::vector<std::uint64_t> keys;
  double log_ratio = 0.0;  // log tau0 - log tau1
};

/// Nearest-neighbour chains ending at the newest frame of the history.
std::vector<BirthCandidate> enumerate_candidates(const ClutterHistory& history, const ModelParams& params);

struct BirthOutcome {
  std::vector<Track> born;
  int capacity_skipped = 0;
};

/// Spawns one track per accepted candidate (tau0 > tau1), greedily by
/// decreasing likelihood ratio, consuming the used detections.
BirthOutcome scan_and_spawn(ClutterHistory& history, const std::vector<Track>& tracks, const ModelParams& params,
                            int& next_track_id);

/// Box in state space whose projection through `detector` is `y`.
BoundingBox state_box_from_observation(const DetectorModel& detector, const BoundingBox& y);

}  // namespace vbmot
