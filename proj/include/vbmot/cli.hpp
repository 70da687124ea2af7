#pragma once

// Subcommand bodies behind the `vbmot` executable. Each returns a process exit
// code and writes progress to `log`.

#include "vbmot/config.hpp"
#include "vbmot/metrics.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace vbmot {

enum class ReportFormat { text, structured };

struct SimulateFiles {
  std::string detections;
  std::string histograms;
  std::string truth;
};

/// File names used by `simulate` and `demo` inside an output directory.
SimulateFiles simulate_files(const std::string& out_dir);

void cmd_simulate(const Config& config, const std::string& out_dir, std::ostream& log);

/// Tracks a detection file (sidecar `<detections>.hist` when present).
void cmd_track(const std::string& detections_path, const Config& config, const std::string& out_tracks,
               std::ostream& log, bool progress = true);

EvaluationReport evaluate_files(const std::string& truth_path, const std::string& tracks_path, const Config& config);

/// Writes the report to `out_report` (or `log` when empty).
EvaluationReport cmd_eval(const std::string& truth_path, const std::string& tracks_path, const Config& config,
                          const std::string& out_report, ReportFormat format, std::ostream& log);

/// simulate + track + eval on a preset; prints a summary table.
EvaluationReport cmd_demo(const Config& config, const std::string& out_dir, ReportFormat format, std::ostream& log);

/// Converts ground truth and track rows to frame-aligned labeled sequences of
/// length `frames`. Invisible truth rows are dropped when `visible_only`.
LabeledSequence truth_sequence(const GroundTruth& truth, int frames, bool visible_only);

}  // namespace vbmot
