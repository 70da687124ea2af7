#include "vbmot/config.hpp"

#include "numtext.hpp"
#include "vbmot/errors.hpp"
#include "vbmot/observation_model.hpp"

#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

namespace vbmot {

namespace {

struct Entry {
  std::string key;
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
  throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as " + expected);
}

double to_double(const std::string& key, const std::string& v) {
  auto d = text::parse_double(v);
  if (!d) bad_value(key, v, "number");
  return *d;
}

long long to_int(const std::string& key, const std::string& v) {
  auto d = text::parse_int(v);
  if (!d) bad_value(key, v, "integer");
  return *d;
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string_view s = text::trim(v);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  bad_value(key, v, "boolean");
}

template <int N>
Eigen::Matrix<double, N, 1> to_vec(const std::string& key, const std::string& v) {
  const auto parts = text::split(v, ',');
  if (parts.size() != static_cast<std::size_t>(N)) bad_value(key, v, std::to_string(N) + " comma-separated numbers");
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    auto d = text::parse_double(parts[static_cast<std::size_t>(i)]);
    if (!d) bad_value(key, v, "number list");
    out(i) = *d;
  }
  return out;
}

template <int N>
std::string fmt_vec(const Eigen::Matrix<double, N, 1>& v) {
  std::string s;
  for (int i = 0; i < N; ++i) {
    if (i) s += ',';
    s += text::format(v(i));
  }
  return s;
}

std::string fmt(double v) { return text::format(v); }
std::string fmt(long long v) { return text::format(v); }
std::string fmt_bool(bool b) { return b ? "true" : "false"; }

Entry real(std::string key, double& ref) {
  return {key, [&ref] { return fmt(ref); }, [&ref, key](const std::string& v) { ref = to_double(key, v); }};
}

Entry integer(std::string key, int& ref) {
  return {key, [&ref] { return fmt(static_cast<long long>(ref)); },
          [&ref, key](const std::string& v) { ref = static_cast<int>(to_int(key, v)); }};
}

Entry count(std::string key, std::size_t& ref) {
  return {key, [&ref] { return fmt(static_cast<long long>(ref)); },
          [&ref, key](const std::string& v) {
            const long long n = to_int(key, v);
            if (n < 0) bad_value(key, v, "non-negative integer");
            ref = static_cast<std::size_t>(n);
          }};
}

Entry seed(std::string key, std::uint64_t& ref) {
  return {key, [&ref] { return fmt(static_cast<long long>(ref)); },
          [&ref, key](const std::string& v) { ref = static_cast<std::uint64_t>(to_int(key, v)); }};
}

Entry flag(std::string key, bool& ref) {
  return {key, [&ref] { return fmt_bool(ref); }, [&ref, key](const std::string& v) { ref = to_bool(key, v); }};
}

template <int N>
Entry vec(std::string key, Eigen::Matrix<double, N, 1>& ref) {
  return {key, [&ref] { return fmt_vec<N>(ref); }, [&ref, key](const std::string& v) { ref = to_vec<N>(key, v); }};
}

std::vector<Entry> entries(Config& c) {
  std::vector<Entry> e;
  e.push_back(real("image.width", c.image_width));
  e.push_back(real("image.height", c.image_height));
  e.push_back(real("box.min_w", c.box_min_w));
  e.push_back(real("box.max_w", c.box_max_w));
  e.push_back(real("box.min_h", c.box_min_h));
  e.push_back(real("box.max_h", c.box_max_h));
  e.push_back({"detectors", [&c] { return fmt(static_cast<long long>(c.detectors.size())); },
               [&c](const std::string& v) {
                 const long long n = to_int("detectors", v);
                 if (n < 1 || n > 16) bad_value("detectors", v, "detector count in [1,16]");
                 c.detectors.resize(static_cast<std::size_t>(n));
                 c.sim.detectors.resize(static_cast<std::size_t>(n));
               }});
  for (std::size_t i = 0; i < c.detectors.size(); ++i) {
    const std::string p = "detector" + std::to_string(i + 1) + ".";
    DetectorConfig& d = c.detectors[i];
    e.push_back(vec<4>(p + "obs_std", d.obs_std));
    e.push_back(vec<4>(p + "scale", d.scale));
    e.push_back(vec<4>(p + "offset", d.offset));
    e.push_back(real(p + "clutter_density", d.clutter_density));
    e.push_back(real(p + "appearance_clutter_density", d.appearance_clutter_density));
  }
  e.push_back(vec<6>("dynamics_std", c.dynamics_std));
  e.push_back(count("appearance.bins", c.appearance_bins));
  e.push_back(real("appearance.lambda", c.appearance_lambda));
  e.push_back(count("appearance.mc_samples", c.appearance_mc_samples));
  e.push_back(seed("appearance.mc_seed", c.appearance_mc_seed));
  e.push_back(integer("vem.max_iterations", c.vem.max_iterations));
  e.push_back(real("vem.tolerance", c.vem.tolerance));
  e.push_back(real("vem.prior_mix", c.vem.prior_mix));
  e.push_back(flag("vem.learn_obs_covariance", c.vem.learn_obs_covariance));
  e.push_back(flag("vem.learn_dynamics_covariance", c.vem.learn_dynamics_covariance));
  e.push_back(integer("max_tracks", c.max_tracks));
  e.push_back(integer("birth.window", c.birth_window));
  e.push_back(real("birth.clutter_threshold", c.birth_clutter_threshold));
  e.push_back(real("birth.gate_factor", c.birth_gate_factor));
  e.push_back(real("birth.flat_velocity_std", c.birth_flat_velocity_std));
  e.push_back(vec<6>("birth.std", c.birth_std));
  e.push_back(real("visibility.pi_v", c.visibility.pi_v));
  e.push_back(real("visibility.lambda", c.visibility.lambda));
  e.push_back({"visibility.likelihood",
               [&c] { return std::string(c.visibility.orientation == VisibilityLikelihood::swapped ? "swapped" : "as-printed"); },
               [&c](const std::string& v) {
                 const std::string_view s = text::trim(v);
                 if (s == "swapped") c.visibility.orientation = VisibilityLikelihood::swapped;
                 else if (s == "as-printed") c.visibility.orientation = VisibilityLikelihood::as_printed;
                 else bad_value("visibility.likelihood", v, "'swapped' or 'as-printed'");
               }});
  e.push_back(real("visibility.report_threshold", c.visibility.report_threshold));
  e.push_back(real("metrics.iou_threshold", c.metrics_iou_threshold));
  e.push_back(real("metrics.ospa_cutoff", c.metrics_sets.ospa_cutoff));
  e.push_back(real("metrics.ospa_order", c.metrics_sets.ospa_order));
  e.push_back(real("metrics.omat_order", c.metrics_sets.omat_order));
  e.push_back({"metrics.ground_distance",
               [&c] { return std::string(c.metrics_sets.distance == GroundDistance::center ? "center" : "iou"); },
               [&c](const std::string& v) {
                 const std::string_view s = text::trim(v);
                 if (s == "center") c.metrics_sets.distance = GroundDistance::center;
                 else if (s == "iou") c.metrics_sets.distance = GroundDistance::iou;
                 else bad_value("metrics.ground_distance", v, "'center' or 'iou'");
               }});
  e.push_back(flag("metrics.visible_only", c.metrics_visible_only));

  ScenarioConfig& s = c.sim;
  e.push_back(integer("sim.frames", s.frames));
  e.push_back(seed("sim.seed", s.seed));
  e.push_back(vec<6>("sim.dynamics_std", s.dynamics_std));
  e.push_back(real("sim.reference_concentration", s.reference_concentration));
  e.push_back(real("sim.observation_concentration", s.observation_concentration));
  e.push_back(real("sim.clutter_min_w", s.clutter_min_w));
  e.push_back(real("sim.clutter_max_w", s.clutter_max_w));
  e.push_back(real("sim.clutter_min_h", s.clutter_min_h));
  e.push_back(real("sim.clutter_max_h", s.clutter_max_h));
  for (std::size_t i = 0; i < s.detectors.size(); ++i) {
    const std::string p = "sim.detector" + std::to_string(i + 1) + ".";
    SimDetector& d = s.detectors[i];
    e.push_back(vec<4>(p + "noise_std", d.noise_std));
    e.push_back(real(p + "miss", d.miss_probability));
    e.push_back(real(p + "clutter_rate", d.clutter_rate));
  }
  e.push_back({"sim.targets", [&s] { return fmt(static_cast<long long>(s.targets.size())); },
               [&s](const std::string& v) {
                 const long long n = to_int("sim.targets", v);
                 if (n < 0 || n > 10000) bad_value("sim.targets", v, "target count in [0,10000]");
                 s.targets.resize(static_cast<std::size_t>(n));
               }});
  for (std::size_t j = 0; j < s.targets.size(); ++j) {
    const std::string key = "sim.target" + std::to_string(j + 1);
    TargetScript& t = s.targets[j];
    e.push_back({key,
                 [&t] {
                   return fmt(static_cast<long long>(t.birth_frame)) + "," + fmt(static_cast<long long>(t.death_frame)) +
                          "," + fmt_vec<6>(t.initial);
                 },
                 [&t, key](const std::string& v) {
                   const auto parts = text::split(v, ',');
                   if (parts.size() != 8) bad_value(key, v, "birth,death,x,y,w,h,vx,vy");
                   auto b = text::parse_int(parts[0]);
                   auto d = text::parse_int(parts[1]);
                   if (!b || !d) bad_value(key, v, "birth,death,x,y,w,h,vx,vy");
                   std::string rest;
                   for (std::size_t k = 2; k < 8; ++k) rest += std::string(parts[k]) + (k < 7 ? "," : "");
                   t.birth_frame = static_cast<int>(*b);
                   t.death_frame = static_cast<int>(*d);
                   t.initial = to_vec<6>(key, rest);
                 }});
    e.push_back({key + ".occlusion",
                 [&t] {
                   return fmt(static_cast<long long>(t.occlusion_start)) + "," +
                          fmt(static_cast<long long>(t.occlusion_end));
                 },
                 [&t, key](const std::string& v) {
                   const auto parts = text::split(v, ',');
                   auto a = parts.size() == 2 ? text::parse_int(parts[0]) : std::nullopt;
                   auto b = parts.size() == 2 ? text::parse_int(parts[1]) : std::nullopt;
                   if (!a || !b) bad_value(key + ".occlusion", v, "start,end");
                   t.occlusion_start = static_cast<int>(*a);
                   t.occlusion_end = static_cast<int>(*b);
                 }});
  }
  return e;
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  const std::string k(text::trim(key));
  for (Entry& e : entries(*this)) {
    if (e.key == k) {
      e.set(value);
      return;
    }
  }
  static const std::regex indexed(R"((sim\.)?(detector|target)(\d+)(\..*)?)");
  if (std::regex_match(k, indexed))
    throw ConfigError("config key '" + k + "': index out of range (set 'detectors' / 'sim.targets' first)");
  throw ConfigError("unknown config key '" + k + "'");
}

void Config::apply(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string Config::to_text() const {
  Config copy = *this;
  std::string out;
  for (const Entry& e : entries(copy)) out += e.key + " = " + e.get() + "\n";
  return out;
}

double Config::derived_clutter_density() const {
  const double area = image_width * image_height * (box_max_w - box_min_w) * (box_max_h - box_min_h);
  if (!(area > 0.0)) throw ConfigError("image size and box ranges must give a positive volume");
  return 1.0 / area;
}

ModelParams Config::model_params() const {
  if (appearance_bins == 0) throw ConfigError("appearance.bins must be positive");
  if (!(visibility.pi_v >= 0.0 && visibility.pi_v <= 1.0)) throw ConfigError("visibility.pi_v outside [0,1]");
  if (birth_window < 0) throw ConfigError("birth.window must be >= 0");
  if (vem.max_iterations < 1) throw ConfigError("vem.max_iterations must be >= 1");
  if (max_tracks < 1) throw ConfigError("max_tracks must be >= 1");
  ModelParams p;
  const double u_y = derived_clutter_density();
  const double u_h = 1.0 / simplex_volume(appearance_bins);
  for (const DetectorConfig& dc : detectors) {
    DetectorModel d = DetectorModel::affine(dc.scale, dc.offset, dc.obs_std.array().square().matrix().asDiagonal());
    d.clutter_density = dc.clutter_density > 0.0 ? dc.clutter_density : u_y;
    d.appearance_clutter_density = dc.appearance_clutter_density > 0.0 ? dc.appearance_clutter_density : u_h;
    d.validate();
    p.detectors.push_back(d);
  }
  p.dynamics_covariance = dynamics_std.array().square().matrix().asDiagonal();
  p.lambda_appearance = appearance_lambda;
  p.w_lambda = (appearance_mc_samples == kDefaultWLambdaSamples && appearance_mc_seed == kDefaultWLambdaSeed)
                   ? cached_w_lambda(appearance_lambda, appearance_bins)
                   : estimate_w_lambda(appearance_lambda, appearance_bins, appearance_mc_samples, appearance_mc_seed);
  p.visibility = visibility;
  p.vem = vem;
  p.max_tracks = max_tracks;

  p.birth.window = birth_window;
  p.birth.clutter_threshold = birth_clutter_threshold;
  p.birth.gate_factor = birth_gate_factor;
  p.birth.flat_mean << image_width / 2, image_height / 2, (box_min_w + box_max_w) / 2, (box_min_h + box_max_h) / 2, 0, 0;
  Vec6 flat_std;
  flat_std << image_width, image_height, image_width, image_height, birth_flat_velocity_std, birth_flat_velocity_std;
  p.birth.flat_covariance = flat_std.array().square().matrix().asDiagonal();
  p.birth.birth_covariance = birth_std.array().square().matrix().asDiagonal();
  return p;
}

Config parse_config(const std::string& text_in, const std::string& origin, Config base) {
  std::istringstream in(text_in);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(origin, lineno, "expected key = value");
    try {
      base.set(std::string(s.substr(0, eq)), std::string(s.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ParseError(origin, lineno, e.what());
    }
  }
  return base;
}

Config load_config(const std::string& path, Config base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), path, std::move(base));
}

Config preset_config(const std::string& name) {
  Config c;
  c.sim = scenario_preset(name);
  c.image_width = c.sim.image_width;
  c.image_height = c.sim.image_height;
  c.appearance_bins = c.sim.bins;
  c.detectors.resize(c.sim.detectors.size());
  for (std::size_t i = 0; i < c.detectors.size(); ++i) {
    c.detectors[i].scale = c.sim.detectors[i].scale;
    c.detectors[i].offset = c.sim.detectors[i].offset;
  }
  if (name == "cpd-like") {
    c.detectors[0].obs_std = Vec4(4.0, 4.0, 3.0, 3.0);
    c.detectors[1].obs_std = Vec4(3.0, 3.0, 2.0, 2.0);
    c.dynamics_std << 0.5, 0.5, 0.3, 0.3, 0.05, 0.05;
    c.birth_std << 4.0, 4.0, 3.0, 3.0, 1.0, 1.0;
    c.visibility.pi_v = 0.9;
    c.visibility.lambda = 5.0;
  } else if (name == "pets-like") {
    c.box_min_w = 5.0;
    c.box_max_w = 150.0;
    c.box_min_h = 10.0;
    c.box_max_h = 250.0;
    c.detectors[0].obs_std = Vec4(3.0, 3.0, 2.0, 2.0);
    c.dynamics_std << 0.5, 0.5, 0.2, 0.2, 0.1, 0.1;
    c.birth_std << 3.0, 3.0, 2.0, 2.0, 1.5, 1.5;
    c.visibility.pi_v = 0.7;
    c.visibility.lambda = 50.0;
  }
  return c;
}

}  // namespace vbmot
