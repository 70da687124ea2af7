#include "vbmot/observation_model.hpp"

#include "vbmot/errors.hpp"
#include "vbmot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace vbmot {

const DetectorModel& ModelParams::detector(int detector_id) const {
  if (detector_id < 1 || static_cast<std::size_t>(detector_id) > detectors.size())
    throw std::out_of_range("detector id " + std::to_string(detector_id) + " not configured");
  return detectors[static_cast<std::size_t>(detector_id - 1)];
}

double log_localization_likelihood(const DetectorModel& detector, const Vec4& y, const Vec6& state) {
  Eigen::LLT<Mat4> llt(detector.obs_covariance);
  if (llt.info() != Eigen::Success) throw ConfigError("detector covariance is not positive definite");
  const Vec4 r = y - project(detector, state);
  const Vec4 z = llt.matrixL().solve(r);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * (4.0 * std::log(2.0 * std::numbers::pi) + log_det + z.squaredNorm());
}

double localization_likelihood(const DetectorModel& detector, const Vec4& y, const Vec6& state) {
  return std::exp(log_localization_likelihood(detector, y, state));
}

double bhattacharyya_distance(const AppearanceHistogram& a, const AppearanceHistogram& b) {
  if (a.size() != b.size()) throw std::invalid_argument("histogram dimensions differ");
  const double bc = kernels::bhattacharyya_coefficient(a.bins(), b.bins());
  return std::sqrt(std::clamp(1.0 - bc, 0.0, 1.0));
}

double log_appearance_likelihood(const AppearanceHistogram& h, const AppearanceHistogram& ref, double lambda,
                                 double w_lambda) {
  return -lambda * bhattacharyya_distance(h, ref) - std::log(w_lambda);
}

double appearance_likelihood(const AppearanceHistogram& h, const AppearanceHistogram& ref, double lambda,
                             double w_lambda) {
  return std::exp(log_appearance_likelihood(h, ref, lambda, w_lambda));
}

double simplex_volume(std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("simplex needs at least one bin");
  return std::exp(-std::lgamma(static_cast<double>(bins)));
}

MonteCarloEstimate estimate_w_lambda(double lambda, const AppearanceHistogram& ref, std::size_t samples,
                                     std::uint64_t seed) {
  const std::size_t bins = ref.size();
  if (bins == 0 || samples == 0) throw std::invalid_argument("estimate_w_lambda: empty input");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);

  constexpr std::size_t kBlock = 2048;
  std::vector<double> rows(kBlock * bins);
  std::vector<double> coeff(kBlock);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t done = 0; done < samples;) {
    const std::size_t n = std::min(kBlock, samples - done);
    for (std::size_t r = 0; r < n; ++r) {
      double* row = rows.data() + r * bins;
      double total = 0.0;
      for (std::size_t k = 0; k < bins; ++k) total += (row[k] = expo(rng));
      for (std::size_t k = 0; k < bins; ++k) row[k] /= total;
    }
    kernels::bhattacharyya_coefficients(ref.bins(), std::span(rows.data(), n * bins), std::span(coeff.data(), n));
    for (std::size_t r = 0; r < n; ++r) {
      const double v = std::exp(-lambda * std::sqrt(std::clamp(1.0 - coeff[r], 0.0, 1.0)));
      sum += v;
      sum_sq += v * v;
    }
    done += n;
  }
  const double m = static_cast<double>(samples);
  const double mean = sum / m;
  const double var = samples > 1 ? std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0)) : 0.0;
  const double vol = simplex_volume(bins);
  return {vol * mean, vol * std::sqrt(var / m)};
}

double estimate_w_lambda(double lambda, std::size_t bins, std::size_t samples, std::uint64_t seed) {
  return estimate_w_lambda(lambda, AppearanceHistogram::uniform(bins), samples, seed).value;
}

double cached_w_lambda(double lambda, std::size_t bins) {
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, double> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(lambda, bins);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double w = estimate_w_lambda(lambda, bins, kDefaultWLambdaSamples, kDefaultWLambdaSeed);
  cache.emplace(key, w);
  return w;
}

double exp_trace_factor(const DetectorModel& detector, const Mat6& covariance) {
  const Mat4 pgp = detector.projection * covariance * detector.projection.transpose();
  const double tr = detector.obs_covariance.llt().solve(pgp).trace();
  return std::exp(-0.5 * tr);
}

double log_epsilon(const DetectorModel& detector, const Detection& detection, const GaussianBelief& belief,
                   const AppearanceHistogram& ref, const ModelParams& params) {
  const Mat4 pgp = detector.projection * belief.covariance * detector.projection.transpose();
  const double tr = detector.obs_covariance.llt().solve(pgp).trace();
  double log_eps = log_localization_likelihood(detector, detection.box.as_vector(), belief.mean) - 0.5 * tr;
  if (!detection.appearance.empty() && !ref.empty())
    log_eps += log_appearance_likelihood(detection.appearance, ref, params.lambda_appearance, params.w_lambda);
  else
    log_eps += std::log(detector.appearance_clutter_density);
  return log_eps;
}

double epsilon(const DetectorModel& detector, const Detection& detection, const GaussianBelief& belief,
               const AppearanceHistogram& ref, const ModelParams& params) {
  return std::exp(log_epsilon(detector, detection, belief, ref, params));
}

double epsilon_clutter(const DetectorModel& detector) {
  return detector.clutter_density * detector.appearance_clutter_density;
}

EpsilonTable::EpsilonTable(const std::vector<std::size_t>& detections_per_detector, std::size_t targets)
    : targets_(targets) {
  if (targets == 0) throw std::invalid_argument("epsilon table needs the clutter column");
  log_values_.reserve(detections_per_detector.size());
  for (std::size_t k : detections_per_detector)
    log_values_.emplace_back(Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(targets),
                                                       -std::numeric_limits<double>::infinity()));
}

double EpsilonTable::value(std::size_t i, std::size_t k, std::size_t n) const {
  return std::exp(log_values_[i](k, n));
}

void EpsilonTable::set(std::size_t i, std::size_t k, std::size_t n, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("epsilon must be finite and non-negative");
  log_values_[i](k, n) = std::log(v);
}

EpsilonTable compute_epsilons(const FrameDetections& detections, const std::vector<GaussianBelief>& beliefs,
                              const std::vector<AppearanceHistogram>& references, const ModelParams& params) {
  std::vector<std::size_t> counts;
  for (const auto& d : detections) counts.push_back(d.size());
  EpsilonTable table(counts, beliefs.size() + 1);
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const DetectorModel& det = params.detectors.at(i);
    const double log_clutter = std::log(epsilon_clutter(det));
    for (std::size_t k = 0; k < detections[i].size(); ++k) {
      table.set_log(i, k, 0, log_clutter);
      for (std::size_t n = 0; n < beliefs.size(); ++n)
        table.set_log(i, k, n + 1, log_epsilon(det, detections[i][k], beliefs[n], references[n], params));
    }
  }
  return table;
}

}  // namespace vbmot
