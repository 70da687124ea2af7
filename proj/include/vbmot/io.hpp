#pragma once

// Plain-text file formats.
//
//   detections  frame,detector_id,x,y,w,h,conf        (extra trailing fields ignored)
//   histograms  frame,index,b1,...,bB                 (index: 0-based line order within the frame)
//   tracks      frame,id,x,y,w,h,visibility_posterior
//   truth       frame,id,x,y,w,h,visible
//
// Frames are 1-based. A detector_id of -1 (plain MOT detection files) reads as
// detector 1. Numbers are written with shortest round-trip formatting.

#include "vbmot/core.hpp"
#include "vbmot/simulator.hpp"

#include <string>
#include <vector>

namespace vbmot {

/// detections[t-1] holds every detection of frame t in file order.
struct DetectionStream {
  std::vector<std::vector<Detection>> frames;
  std::vector<std::string> warnings;
};

/// Reads a detection file plus its histogram sidecar. Without a sidecar every
/// detection gets a uniform histogram of `bins` bins and a warning is recorded.
/// Throws ParseError on malformed lines or decreasing frames.
DetectionStream load_detections(const std::string& path, const std::string& sidecar_path, std::size_t bins);
/// Uses `<path>.hist` as the sidecar when it exists.
DetectionStream load_detections(const std::string& path, std::size_t bins);

void write_detections(const std::string& path, const std::string& sidecar_path,
                      const std::vector<std::vector<Detection>>& frames);

struct TrackRow {
  int frame = 0;
  int id = 0;
  BoundingBox box;
  double visibility_posterior = 1.0;
};

void write_tracks(const std::string& path, const std::vector<TrackRow>& rows);
std::vector<TrackRow> load_tracks(const std::string& path);

void write_truth(const std::string& path, const GroundTruth& truth);
/// References are not stored in the file; `frames` is the largest frame seen.
GroundTruth load_truth(const std::string& path);

/// Default sidecar name for a detection file.
std::string histogram_sidecar_path(const std::string& detections_path);

}  // namespace vbmot
