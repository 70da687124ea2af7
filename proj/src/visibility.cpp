#include "vbmot/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vbmot {

double visibility_observation(std::size_t target, const AssignmentPriors& priors, const Existence& existence) {
  if (target == 0 || target > existence.size()) throw std::out_of_range("visibility_observation: bad target");
  if (!existence[target - 1]) return 0.0;
  double nu = 0.0;
  for (const auto& a : priors)
    if (static_cast<std::size_t>(a.size()) > target) nu += a(static_cast<Eigen::Index>(target));
  return nu;
}

std::pair<double, double> visibility_likelihoods(double nu, double lambda, VisibilityLikelihood orientation) {
  const double e = std::exp(-lambda * nu);
  const double rest = -std::expm1(-lambda * nu);
  return orientation == VisibilityLikelihood::as_printed ? std::pair{e, rest} : std::pair{rest, e};
}

VisibilityState visibility_update(VisibilityState prev, double nu, double pi_v, double lambda,
                                  VisibilityLikelihood orientation) {
  const double p1 = std::clamp(prev.posterior_visible, 0.0, 1.0);
  const double pred1 = pi_v * p1 + (1.0 - pi_v) * (1.0 - p1);
  const double pred0 = 1.0 - pred1;
  const auto [l1, l0] = visibility_likelihoods(nu, lambda, orientation);
  const double num1 = l1 * pred1;
  const double z = num1 + l0 * pred0;
  if (!(z > 0.0)) return {pred1};
  return {std::clamp(num1 / z, 0.0, 1.0)};
}

bool is_reported(const Track& track, double report_threshold) {
  return track.visibility_posterior >= report_threshold;
}

}  // namespace vbmot
