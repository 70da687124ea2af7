#include "vbmot/kernels.hpp"

#include <cmath>

namespace vbmot::kernels::scalar {

double bhattacharyya_coefficient(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::sqrt(a[k] * b[k]);
  return s;
}

void pairwise_distances(const double* ax, const double* ay, std::size_t na, const double* bx,
                        const double* by, std::size_t nb, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double dx = bx[j] - ax[i];
      const double dy = by[j] - ay[i];
      out[i * nb + j] = std::sqrt(dx * dx + dy * dy);
    }
  }
}

}  // namespace vbmot::kernels::scalar
