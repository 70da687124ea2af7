#include "vbmot/io.hpp"

#include "numtext.hpp"
#include "vbmot/errors.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace vbmot {

namespace {

struct LineReader {
  explicit LineReader(const std::string& path) : path(path), in(path) {
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
  }

  // Next non-blank, non-comment line split on commas; false at EOF.
  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in, line)) {
      ++number;
      const std::string_view s = text::trim(line);
      if (s.empty() || s.front() == '#') continue;
      fields = text::split(s, ',');
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path, number, what); }

  double real(std::string_view f, const char* name) const {
    auto v = text::parse_double(f);
    if (!v) fail(std::string("bad ") + name + " '" + std::string(f) + "'");
    return *v;
  }

  int integer(std::string_view f, const char* name) const {
    auto v = text::parse_int(f);
    if (!v || *v < -2147483647LL || *v > 2147483647LL) fail(std::string("bad ") + name + " '" + std::string(f) + "'");
    return static_cast<int>(*v);
  }

  int frame(std::string_view f) const {
    const int t = integer(f, "frame");
    if (t < 1) fail("frame must be >= 1");
    return t;
  }

  BoundingBox box(const std::vector<std::string_view>& f, std::size_t at) const {
    BoundingBox b{real(f[at], "x"), real(f[at + 1], "y"), real(f[at + 2], "w"), real(f[at + 3], "h")};
    if (!b.valid()) fail("box must be finite with positive width and height");
    return b;
  }

  std::string path;
  std::ifstream in;
  std::string line;
  std::size_t number = 0;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void write_box(std::ofstream& out, const BoundingBox& b) {
  out << text::format(b.x) << ',' << text::format(b.y) << ',' << text::format(b.w) << ',' << text::format(b.h);
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

using HistogramKey = std::pair<int, std::size_t>;

std::map<HistogramKey, AppearanceHistogram> load_histograms(const std::string& path, std::size_t bins) {
  std::map<HistogramKey, AppearanceHistogram> out;
  LineReader r(path);
  std::vector<std::string_view> f;
  while (r.next(f)) {
    if (f.size() != bins + 2)
      r.fail("expected frame,index and " + std::to_string(bins) + " bins, got " + std::to_string(f.size()) + " fields");
    const int t = r.frame(f[0]);
    const int index = r.integer(f[1], "index");
    if (index < 0) r.fail("index must be >= 0");
    std::vector<double> w(bins);
    for (std::size_t k = 0; k < bins; ++k) w[k] = r.real(f[k + 2], "bin");
    try {
      if (!out.emplace(HistogramKey{t, static_cast<std::size_t>(index)}, AppearanceHistogram::from_weights(w)).second)
        r.fail("duplicate histogram row");
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
  }
  return out;
}

}  // namespace

std::string histogram_sidecar_path(const std::string& detections_path) { return detections_path + ".hist"; }

DetectionStream load_detections(const std::string& path, const std::string& sidecar_path, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram bins must be positive");
  DetectionStream out;
  std::map<HistogramKey, AppearanceHistogram> hists;
  const bool have_sidecar = !sidecar_path.empty() && std::filesystem::exists(sidecar_path);
  if (have_sidecar) {
    hists = load_histograms(sidecar_path, bins);
  } else {
    out.warnings.push_back("no histogram sidecar for '" + path + "'; using uniform histograms");
  }

  LineReader r(path);
  std::vector<std::string_view> f;
  std::size_t missing = 0;
  int last = 0;
  while (r.next(f)) {
    if (f.size() < 7) r.fail("expected frame,detector_id,x,y,w,h,conf");
    Detection d;
    d.frame = r.frame(f[0]);
    if (d.frame < last) r.fail("frames must be non-decreasing");
    last = d.frame;
    d.detector_id = r.integer(f[1], "detector_id");
    if (d.detector_id == -1) d.detector_id = 1;
    if (d.detector_id < 1) r.fail("detector_id must be >= 1 or -1");
    d.box = r.box(f, 2);
    r.real(f[6], "conf");
    if (out.frames.size() < static_cast<std::size_t>(d.frame)) out.frames.resize(static_cast<std::size_t>(d.frame));
    auto& frame = out.frames[static_cast<std::size_t>(d.frame - 1)];
    if (have_sidecar) {
      auto it = hists.find({d.frame, frame.size()});
      if (it != hists.end()) {
        d.appearance = it->second;
      } else {
        ++missing;
      }
    }
    if (d.appearance.empty()) d.appearance = AppearanceHistogram::uniform(bins);
    frame.push_back(std::move(d));
  }
  if (missing > 0)
    out.warnings.push_back(std::to_string(missing) + " detection(s) without a histogram row; using uniform histograms");
  return out;
}

DetectionStream load_detections(const std::string& path, std::size_t bins) {
  return load_detections(path, histogram_sidecar_path(path), bins);
}

void write_detections(const std::string& path, const std::string& sidecar_path,
                      const std::vector<std::vector<Detection>>& frames) {
  auto out = open_out(path);
  std::ofstream hist;
  if (!sidecar_path.empty()) hist = open_out(sidecar_path);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const std::string frame = text::format(static_cast<long long>(t + 1));
    for (std::size_t i = 0; i < frames[t].size(); ++i) {
      const Detection& d = frames[t][i];
      out << frame << ',' << d.detector_id << ',';
      write_box(out, d.box);
      out << ",1\n";
      if (hist.is_open() && !d.appearance.empty()) {
        hist << frame << ',' << i;
        for (double b : d.appearance.bins()) hist << ',' << text::format(b);
        hist << '\n';
      }
    }
  }
  finish(out, path);
  if (hist.is_open()) finish(hist, sidecar_path);
}

void write_tracks(const std::string& path, const std::vector<TrackRow>& rows) {
  auto out = open_out(path);
  for (const TrackRow& r : rows) {
    out << r.frame << ',' << r.id << ',';
    write_box(out, r.box);
    out << ',' << text::format(r.visibility_posterior) << '\n';
  }
  finish(out, path);
}

std::vector<TrackRow> load_tracks(const std::string& path) {
  std::vector<TrackRow> rows;
  LineReader r(path);
  std::vector<std::string_view> f;
  while (r.next(f)) {
    if (f.size() < 7) r.fail("expected frame,id,x,y,w,h,visibility_posterior");
    TrackRow row;
    row.frame = r.frame(f[0]);
    row.id = r.integer(f[1], "id");
    row.box = r.box(f, 2);
    row.visibility_posterior = r.real(f[6], "visibility_posterior");
    rows.push_back(row);
  }
  return rows;
}

void write_truth(const std::string& path, const GroundTruth& truth) {
  auto out = open_out(path);
  for (const GroundTruthRow& r : truth.rows) {
    out << r.frame << ',' << r.id << ',';
    write_box(out, r.box);
    out << ',' << (r.visible ? 1 : 0) << '\n';
  }
  finish(out, path);
}

GroundTruth load_truth(const std::string& path) {
  GroundTruth truth;
  LineReader r(path);
  std::vector<std::string_view> f;
  while (r.next(f)) {
    if (f.size() < 6) r.fail("expected frame,id,x,y,w,h[,visible]");
    GroundTruthRow row;
    row.frame = r.frame(f[0]);
    row.id = r.integer(f[1], "id");
    row.box = r.box(f, 2);
    if (f.size() >= 7) {
      const int v = r.integer(f[6], "visible");
      if (v != 0 && v != 1) r.fail("visible must be 0 or 1");
      row.visible = v == 1;
    }
    truth.frames = std::max(truth.frames, row.frame);
    truth.rows.push_back(row);
  }
  return truth;
}

}  // namespace vbmot
