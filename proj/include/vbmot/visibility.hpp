#pragma once

// Two-state HMM over each track's visibility. Tracks are never deleted; a
// track whose visibility posterior falls below the report threshold sleeps
// and is reported again once the posterior recovers.

#include "vbmot/core.hpp"
#include "vbmot/params.hpp"
#include "vbmot/vem.hpp"

namespace vbmot {

struct VisibilityState {
  double posterior_visible = 1.0;
};

/// nu = e_n * sum_i a^i_n for track slot `target` (>= 1).
double visibility_observation(std::size_t target, const AssignmentPriors& priors, const Existence& existence);

/// (p(nu | visible), p(nu | hidden)) under the configured orientation.
std::pair<double, double> visibility_likelihoods(double nu, double lambda, VisibilityLikelihood orientation);

/// One forward step: predict with the symmetric transition (stay = pi_v),
/// correct with the likelihoods, renormalize. If both likelihoods vanish the
/// predicted distribution is kept.
VisibilityState visibility_update(VisibilityState prev, double nu, double pi_v, double lambda,
                                  VisibilityLikelihood orientation = VisibilityLikelihood::swapped);

bool is_reported(const Track& track, double report_threshold = 0.5);

}  // namespace vbmot
