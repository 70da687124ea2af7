#pragma once

// CLEAR-MOT and identity-free set distances between tracker output and
// ground truth. Set metrics use 2-D box centers as points.

#include "vbmot/core.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vbmot {

struct LabeledBox {
  int id = 0;
  BoundingBox box;
};

/// Frame-aligned sequence: element t-1 holds the objects of frame t.
using LabeledSequence = std::vector<std::vector<LabeledBox>>;

struct ClearReport {
  double mota = 100.0;       // %
  double motp = 100.0;       // % (mean IoU of matches)
  double precision = 100.0;  // %
  double recall = 100.0;     // %
  long true_positives = 0;
  long false_positives = 0;
  long false_negatives = 0;
  long id_switches = 0;
  long ground_truth = 0;
  /// (truth id, hypothesis id) per frame.
  std::vector<std::vector<std::pair<int, int>>> matches;
};

ClearReport clear_mot(const LabeledSequence& truth, const LabeledSequence& hypotheses, double iou_threshold = 0.5);

/// Matching that maximizes total IoU over pairs with IoU >= threshold.
/// Returns (truth index, hypothesis index) pairs.
std::vector<std::pair<int, int>> max_iou_matching(const std::vector<BoundingBox>& truth,
                                                  const std::vector<BoundingBox>& hypotheses, double iou_threshold);

enum class GroundDistance { center, iou };

struct SetMetricOptions {
  double ospa_cutoff = 100.0;
  double ospa_order = 1.0;
  double omat_order = 1.0;
  GroundDistance distance = GroundDistance::center;
};

/// OSPA between point sets; 0 when both are empty.
double ospa(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double cutoff, double order);
/// Optimal mass transfer with uniform masses; nullopt when a set is empty.
std::optional<double> omat(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double order);
/// Symmetric Hausdorff distance; nullopt when a set is empty.
std::optional<double> hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

/// Same metrics on a precomputed ground-distance matrix (rows: a, cols: b).
double ospa_from_distances(const Eigen::MatrixXd& d, double cutoff, double order);
double omat_from_distances(const Eigen::MatrixXd& d, double order);
double hausdorff_from_distances(const Eigen::MatrixXd& d);

Eigen::MatrixXd center_distances(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

struct SetReport {
  std::vector<double> ospa;
  std::vector<std::optional<double>> omat;
  std::vector<std::optional<double>> hausdorff;
  double mean_ospa = 0.0;
  double mean_omat = 0.0;
  double mean_hausdorff = 0.0;
  /// Frames where OMAT/Hausdorff were defined (both sets non-empty).
  long defined_frames = 0;
  long frames = 0;
};

SetReport set_metrics(const LabeledSequence& truth, const LabeledSequence& hypotheses,
                      const SetMetricOptions& options = {});

struct CountHistogram {
  std::map<int, long> bins;  // |#truth - #reported| -> frames
  long frames = 0;
  double fraction_exact() const;
};

CountHistogram count_error_histogram(const LabeledSequence& truth, const LabeledSequence& hypotheses);

struct EvaluationReport {
  ClearReport clear;
  SetReport sets;
  CountHistogram counts;
};

std::string format_text_report(const EvaluationReport& report);
/// JSON document with the same content.
std::string format_structured_report(const EvaluationReport& report);

}  // namespace vbmot
