#include "vbmot/cli.hpp"

#include "vbmot/io.hpp"
#include "vbmot/simulator.hpp"
#include "vbmot/tracker.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace vbmot {

namespace {

LabeledSequence track_sequence_of(const std::vector<TrackRow>& rows, int frames) {
  LabeledSequence out(static_cast<std::size_t>(frames));
  for (const TrackRow& r : rows)
    if (r.frame >= 1 && r.frame <= frames) out[static_cast<std::size_t>(r.frame - 1)].push_back({r.id, r.box});
  return out;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << body;
  if (!out.flush()) throw std::runtime_error("write failed for '" + path + "'");
}

std::string render(const EvaluationReport& report, ReportFormat format) {
  return format == ReportFormat::structured ? format_structured_report(report) + "\n" : format_text_report(report);
}

}  // namespace

SimulateFiles simulate_files(const std::string& out_dir) {
  const std::filesystem::path d(out_dir);
  const std::string det = (d / "detections.txt").string();
  return {det, histogram_sidecar_path(det), (d / "truth.txt").string()};
}

LabeledSequence truth_sequence(const GroundTruth& truth, int frames, bool visible_only) {
  LabeledSequence out(static_cast<std::size_t>(std::max(frames, 0)));
  for (const GroundTruthRow& r : truth.rows) {
    if (visible_only && !r.visible) continue;
    if (r.frame >= 1 && r.frame <= frames) out[static_cast<std::size_t>(r.frame - 1)].push_back({r.id, r.box});
  }
  return out;
}

void cmd_simulate(const Config& config, const std::string& out_dir, std::ostream& log) {
  std::filesystem::create_directories(out_dir);
  const SimulationOutput sim = simulate(config.sim);
  const SimulateFiles files = simulate_files(out_dir);
  write_detections(files.detections, files.histograms, sim.detections);
  write_truth(files.truth, sim.truth);
  std::size_t n = 0;
  for (const auto& f : sim.detections) n += f.size();
  log << "simulated " << sim.truth.frames << " frames, " << config.sim.targets.size() << " targets, " << n
      << " detections -> " << out_dir << "\n";
}

void cmd_track(const std::string& detections_path, const Config& config, const std::string& out_tracks,
               std::ostream& log, bool progress) {
  const DetectionStream stream = load_detections(detections_path, config.appearance_bins);
  for (const std::string& w : stream.warnings) log << "warning: " << w << "\n";
  const ModelParams params = config.model_params();
  Tracker tracker(params);
  std::vector<TrackRow> rows;
  int non_converged = 0;
  for (std::size_t t = 0; t < stream.frames.size(); ++t) {
    const FrameSummary s = tracker.step(static_cast<int>(t + 1), stream.frames[t]);
    if (!s.converged) ++non_converged;
    if (progress) {
      log << "frame " << s.frame << " detections=" << s.detections << " iterations_used=" << s.iterations_used
          << " converged=" << (s.converged ? 1 : 0) << " tracks=" << tracker.tracks().size()
          << " reported=" << s.reported.size();
      for (int id : s.born) log << " born=" << id;
      if (s.capacity_skipped > 0) log << " capacity_skipped=" << s.capacity_skipped;
      log << "\n";
    }
    rows.insert(rows.end(), s.reported.begin(), s.reported.end());
  }
  if (!out_tracks.empty()) {
    const auto parent = std::filesystem::path(out_tracks).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
  }
  write_tracks(out_tracks, rows);
  log << "tracked " << stream.frames.size() << " frames, " << tracker.tracks().size() << " tracks, " << non_converged
      << " frame(s) hit the iteration cap -> " << out_tracks << "\n";
}

EvaluationReport evaluate_files(const std::string& truth_path, const std::string& tracks_path, const Config& config) {
  const GroundTruth truth = load_truth(truth_path);
  const std::vector<TrackRow> rows = load_tracks(tracks_path);
  int frames = truth.frames;
  for (const TrackRow& r : rows) frames = std::max(frames, r.frame);
  const LabeledSequence gt = truth_sequence(truth, frames, config.metrics_visible_only);
  const LabeledSequence hyp = track_sequence_of(rows, frames);
  EvaluationReport report;
  report.clear = clear_mot(gt, hyp, config.metrics_iou_threshold);
  report.sets = set_metrics(gt, hyp, config.metrics_sets);
  report.counts = count_error_histogram(gt, hyp);
  return report;
}

EvaluationReport cmd_eval(const std::string& truth_path, const std::string& tracks_path, const Config& config,
                          const std::string& out_report, ReportFormat format, std::ostream& log) {
  EvaluationReport report = evaluate_files(truth_path, tracks_path, config);
  if (out_report.empty()) {
    log << render(report, format);
  } else {
    write_text(out_report, render(report, format));
    log << "report -> " << out_report << "\n";
  }
  return report;
}

EvaluationReport cmd_demo(const Config& config, const std::string& out_dir, ReportFormat format, std::ostream& log) {
  cmd_simulate(config, out_dir, log);
  const SimulateFiles files = simulate_files(out_dir);
  const std::filesystem::path d(out_dir);
  const std::string tracks = (d / "tracks.txt").string();
  cmd_track(files.detections, config, tracks, log, false);
  const std::string report_path =
      (d / (format == ReportFormat::structured ? "report.json" : "report.txt")).string();
  EvaluationReport r = cmd_eval(files.truth, tracks, config, report_path, format, log);

  log << std::fixed << std::setprecision(2);
  log << "\n  metric              value\n";
  log << "  MOTA (%)         " << std::setw(8) << r.clear.mota << "\n";
  log << "  MOTP (%)         " << std::setw(8) << r.clear.motp << "\n";
  log << "  precision (%)    " << std::setw(8) << r.clear.precision << "\n";
  log << "  recall (%)       " << std::setw(8) << r.clear.recall << "\n";
  log << "  ID switches      " << std::setw(8) << r.clear.id_switches << "\n";
  log << "  mean OSPA (px)   " << std::setw(8) << r.sets.mean_ospa << "\n";
  log << "  mean OMAT (px)   " << std::setw(8) << r.sets.mean_omat << "\n";
  log << "  mean Hausdorff   " << std::setw(8) << r.sets.mean_hausdorff << "\n";
  log << "  exact count (%)  " << std::setw(8) << 100.0 * r.counts.fraction_exact() << "\n";
  log.unsetf(std::ios::floatfield);
  log << std::setprecision(6);
  return r;
}

}  // namespace vbmot
