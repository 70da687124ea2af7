#include "vbmot/metrics.hpp"

#include "vbmot/assignment.hpp"
#include "vbmot/kernels.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vbmot {

std::vector<std::pair<int, int>> max_iou_matching(const std::vector<BoundingBox>& truth,
                                                  const std::vector<BoundingBox>& hypotheses, double iou_threshold) {
  std::vector<std::pair<int, int>> out;
  if (truth.empty() || hypotheses.empty()) return out;
  Eigen::MatrixXd gain(static_cast<Eigen::Index>(truth.size()), static_cast<Eigen::Index>(hypotheses.size()));
  for (std::size_t g = 0; g < truth.size(); ++g) {
    for (std::size_t h = 0; h < hypotheses.size(); ++h) {
      const double v = iou(truth[g], hypotheses[h]);
      gain(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h)) = (v >= iou_threshold && v > 0.0) ? v : 0.0;
    }
  }
  const Assignment a = solve_assignment(-gain);
  for (std::size_t g = 0; g < a.row_to_col.size(); ++g) {
    const int h = a.row_to_col[g];
    if (h >= 0 && gain(static_cast<Eigen::Index>(g), h) > 0.0) out.emplace_back(static_cast<int>(g), h);
  }
  return out;
}

ClearReport clear_mot(const LabeledSequence& truth, const LabeledSequence& hypotheses, double iou_threshold) {
  if (truth.size() != hypotheses.size()) throw std::invalid_argument("clear_mot: sequences are not frame-aligned");
  ClearReport r;
  std::map<int, int> previous;  // truth id -> hyp id matched in the previous frame
  std::map<int, int> last;      // truth id -> last hyp id ever matched
  double iou_sum = 0.0;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const auto& gt = truth[t];
    const auto& hy = hypotheses[t];
    std::vector<char> gt_used(gt.size(), 0), hy_used(hy.size(), 0);
    std::vector<std::pair<int, int>> frame_matches;
    std::map<int, int> current;

    auto record = [&](std::size_t g, std::size_t h) {
      gt_used[g] = hy_used[h] = 1;
      const int gid = gt[g].id;
      const int hid = hy[h].id;
      if (auto it = last.find(gid); it != last.end() && it->second != hid) ++r.id_switches;
      last[gid] = hid;
      current[gid] = hid;
      iou_sum += iou(gt[g].box, hy[h].box);
      frame_matches.emplace_back(gid, hid);
    };

    // Keep last frame's correspondences that still overlap enough.
    for (std::size_t g = 0; g < gt.size(); ++g) {
      auto it = previous.find(gt[g].id);
      if (it == previous.end()) continue;
      for (std::size_t h = 0; h < hy.size(); ++h) {
        if (hy_used[h] || hy[h].id != it->second) continue;
        if (iou(gt[g].box, hy[h].box) >= iou_threshold) record(g, h);
        break;
      }
    }

    std::vector<std::size_t> gt_idx, hy_idx;
    std::vector<BoundingBox> gt_boxes, hy_boxes;
    for (std::size_t g = 0; g < gt.size(); ++g)
      if (!gt_used[g]) { gt_idx.push_back(g); gt_boxes.push_back(gt[g].box); }
    for (std::size_t h = 0; h < hy.size(); ++h)
      if (!hy_used[h]) { hy_idx.push_back(h); hy_boxes.push_back(hy[h].box); }
    for (const auto& [g, h] : max_iou_matching(gt_boxes, hy_boxes, iou_threshold))
      record(gt_idx[static_cast<std::size_t>(g)], hy_idx[static_cast<std::size_t>(h)]);

    const long tp = static_cast<long>(frame_matches.size());
    r.true_positives += tp;
    r.false_negatives += static_cast<long>(gt.size()) - tp;
    r.false_positives += static_cast<long>(hy.size()) - tp;
    r.ground_truth += static_cast<long>(gt.size());
    r.matches.push_back(std::move(frame_matches));
    previous = std::move(current);
  }
  const double errors = static_cast<double>(r.false_positives + r.false_negatives + r.id_switches);
  r.mota = 100.0 * (1.0 - errors / static_cast<double>(std::max<long>(r.ground_truth, 1)));
  if (r.ground_truth == 0 && errors == 0.0) r.mota = 100.0;
  r.motp = r.true_positives > 0 ? 100.0 * iou_sum / static_cast<double>(r.true_positives) : 100.0;
  const long reported = r.true_positives + r.false_positives;
  r.precision = reported > 0 ? 100.0 * static_cast<double>(r.true_positives) / static_cast<double>(reported) : 100.0;
  r.recall = r.ground_truth > 0 ? 100.0 * static_cast<double>(r.true_positives) / static_cast<double>(r.ground_truth)
                                : 100.0;
  return r;
}

Eigen::MatrixXd center_distances(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  std::vector<double> ax(a.size()), ay(a.size()), bx(b.size()), by(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) { ax[i] = a[i](0); ay[i] = a[i](1); }
  for (std::size_t j = 0; j < b.size(); ++j) { bx[j] = b[j](0); by[j] = b[j](1); }
  std::vector<double> flat(a.size() * b.size());
  kernels::pairwise_distances(ax, ay, bx, by, flat);
  Eigen::MatrixXd d(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat[i * b.size() + j];
  return d;
}

double ospa_from_distances(const Eigen::MatrixXd& d, double cutoff, double order) {
  if (!(cutoff > 0.0) || !(order >= 1.0)) throw std::invalid_argument("ospa needs c > 0 and p >= 1");
  const auto m = static_cast<double>(std::min(d.rows(), d.cols()));
  const auto n = static_cast<double>(std::max(d.rows(), d.cols()));
  if (n == 0.0) return 0.0;
  double total = std::pow(cutoff, order) * (n - m);
  if (m > 0.0) {
    const Eigen::MatrixXd cost = d.cwiseMin(cutoff).array().pow(order).matrix();
    total += solve_assignment(cost).cost;
  }
  return std::pow(total / n, 1.0 / order);
}

double omat_from_distances(const Eigen::MatrixXd& d, double order) {
  if (!(order >= 1.0)) throw std::invalid_argument("omat needs p >= 1");
  return std::pow(solve_uniform_transport(d.array().pow(order).matrix()), 1.0 / order);
}

double hausdorff_from_distances(const Eigen::MatrixXd& d) {
  if (d.size() == 0) throw std::invalid_argument("hausdorff needs two non-empty sets");
  return std::max(d.rowwise().minCoeff().maxCoeff(), d.colwise().minCoeff().maxCoeff());
}

double ospa(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double cutoff, double order) {
  return ospa_from_distances(center_distances(a, b), cutoff, order);
}

std::optional<double> omat(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double order) {
  if (a.empty() || b.empty()) return std::nullopt;
  return omat_from_distances(center_distances(a, b), order);
}

std::optional<double> hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  if (a.empty() || b.empty()) return std::nullopt;
  return hausdorff_from_distances(center_distances(a, b));
}

namespace {

Eigen::MatrixXd ground_distances(const std::vector<LabeledBox>& a, const std::vector<LabeledBox>& b,
                                 GroundDistance kind) {
  if (kind == GroundDistance::center) {
    std::vector<Vec2> pa, pb;
    for (const auto& x : a) pa.push_back(x.box.center());
    for (const auto& x : b) pb.push_back(x.box.center());
    return center_distances(pa, pb);
  }
  Eigen::MatrixXd d(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0 - iou(a[i].box, b[j].box);
  return d;
}

}  // namespace

SetReport set_metrics(const LabeledSequence& truth, const LabeledSequence& hypotheses, const SetMetricOptions& options) {
  if (truth.size() != hypotheses.size()) throw std::invalid_argument("set_metrics: sequences are not frame-aligned");
  SetReport r;
  r.frames = static_cast<long>(truth.size());
  double sum_ospa = 0.0, sum_omat = 0.0, sum_haus = 0.0;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const Eigen::MatrixXd d = ground_distances(truth[t], hypotheses[t], options.distance);
    const double o = ospa_from_distances(d, options.ospa_cutoff, options.ospa_order);
    r.ospa.push_back(o);
    sum_ospa += o;
    if (d.size() == 0) {
      r.omat.emplace_back();
      r.hausdorff.emplace_back();
      continue;
    }
    const double om = omat_from_distances(d, options.omat_order);
    const double h = hausdorff_from_distances(d);
    r.omat.emplace_back(om);
    r.hausdorff.emplace_back(h);
    sum_omat += om;
    sum_haus += h;
    ++r.defined_frames;
  }
  if (r.frames > 0) r.mean_ospa = sum_ospa / static_cast<double>(r.frames);
  if (r.defined_frames > 0) {
    r.mean_omat = sum_omat / static_cast<double>(r.defined_frames);
    r.mean_hausdorff = sum_haus / static_cast<double>(r.defined_frames);
  }
  return r;
}

double CountHistogram::fraction_exact() const {
  if (frames == 0) return 1.0;
  auto it = bins.find(0);
  return it == bins.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(frames);
}

CountHistogram count_error_histogram(const LabeledSequence& truth, const LabeledSequence& hypotheses) {
  if (truth.size() != hypotheses.size()) throw std::invalid_argument("count histogram: sequences are not frame-aligned");
  CountHistogram h;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const long diff = std::labs(static_cast<long>(truth[t].size()) - static_cast<long>(hypotheses[t].size()));
    ++h.bins[static_cast<int>(diff)];
    ++h.frames;
  }
  return h;
}

std::string format_text_report(const EvaluationReport& report) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(2);
  const ClearReport& c = report.clear;
  os << "CLEAR-MOT\n"
     << "  MOTA      " << c.mota << " %\n"
     << "  MOTP      " << c.motp << " %\n"
     << "  Precision " << c.precision << " %\n"
     << "  Recall    " << c.recall << " %\n"
     << "  TP " << c.true_positives << "  FP " << c.false_positives << "  FN " << c.false_negatives << "  IDSW "
     << c.id_switches << "  GT " << c.ground_truth << "\n";
  const SetReport& s = report.sets;
  os << "Set metrics (px)\n"
     << "  OSPA      " << s.mean_ospa << "\n"
     << "  OMAT      " << s.mean_omat << "\n"
     << "  Hausdorff " << s.mean_hausdorff << "\n"
     << "  defined on " << s.defined_frames << " / " << s.frames << " frames\n";
  os << "Count error histogram\n";
  for (const auto& [err, n] : report.counts.bins) os << "  |err|=" << err << "  " << n << " frames\n";
  os << "  exact count in " << 100.0 * report.counts.fraction_exact() << " % of frames\n";
  return os.str();
}

std::string format_structured_report(const EvaluationReport& report) {
  using nlohmann::json;
  const ClearReport& c = report.clear;
  const SetReport& s = report.sets;
  json j;
  j["clear"] = {{"mota", c.mota},
                {"motp", c.motp},
                {"precision", c.precision},
                {"recall", c.recall},
                {"tp", c.true_positives},
                {"fp", c.false_positives},
                {"fn", c.false_negatives},
                {"id_switches", c.id_switches},
                {"ground_truth", c.ground_truth}};
  json omat = json::array(), haus = json::array();
  for (const auto& v : s.omat) omat.push_back(v ? json(*v) : json(nullptr));
  for (const auto& v : s.hausdorff) haus.push_back(v ? json(*v) : json(nullptr));
  j["sets"] = {{"mean_ospa", s.mean_ospa},   {"mean_omat", s.mean_omat}, {"mean_hausdorff", s.mean_hausdorff},
               {"defined_frames", s.defined_frames}, {"frames", s.frames},     {"ospa", s.ospa},
               {"omat", omat},                {"hausdorff", haus}};
  json bins = json::object();
  for (const auto& [err, n] : report.counts.bins) bins[std::to_string(err)] = n;
  j["count_error"] = {{"histogram", bins}, {"frames", report.counts.frames},
                      {"fraction_exact", report.counts.fraction_exact()}};
  return j.dump(2) + "\n";
}

}  // namespace vbmot
