#pragma once

// Causal per-frame pipeline: predict, VEM, birth scan, visibility update and
// reporting. Frames must be fed in increasing order.

#include "vbmot/birth.hpp"
#include "vbmot/core.hpp"
#include "vbmot/io.hpp"
#include "vbmot/params.hpp"
#include "vbmot/vem.hpp"

#include <vector>

namespace vbmot {

struct FrameSummary {
  int frame = 0;
  int iterations_used = 0;
  bool converged = true;
  std::size_t detections = 0;
  std::vector<int> born;         // ids spawned this frame
  std::vector<TrackRow> reported;
  int capacity_skipped = 0;
};

class Tracker {
 public:
  explicit Tracker(ModelParams params);

  /// Processes frame `frame` (strictly greater than the previous one). Any
  /// detector_id outside the configured detectors throws std::invalid_argument.
  FrameSummary step(int frame, const std::vector<Detection>& detections);

  const std::vector<Track>& tracks() const { return tracks_; }
  const ModelParams& params() const { return params_; }
  const AssignmentPriors& priors() const { return priors_; }

 private:
  ModelParams params_;
  std::vector<Track> tracks_;
  AssignmentPriors priors_;
  ClutterHistory history_;
  int next_id_ = 1;
  int last_frame_ = 0;
};

/// Runs a tracker over frames 1..frames.size() and collects every report row.
std::vector<TrackRow> track_sequence(const ModelParams& params, const std::vector<std::vector<Detection>>& frames,
                                     std::vector<FrameSummary>* summaries = nullptr);

}  // namespace vbmot
