// Compiled with -mavx2 only; reached through runtime dispatch.

#include "vbmot/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace vbmot::kernels::avx2 {

double bhattacharyya_coefficient(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_sqrt_pd(p0));
    acc1 = _mm256_add_pd(acc1, _mm256_sqrt_pd(p1));
  }
  for (; k + 4 <= n; k += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc0 = _mm256_add_pd(acc0, _mm256_sqrt_pd(p));
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc0);
  const __m128d hi = _mm256_extractf128_pd(acc0, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  double total = _mm_cvtsd_f64(s);
  for (; k < n; ++k) total += std::sqrt(a[k] * b[k]);
  return total;
}

void pairwise_distances(const double* ax, const double* ay, std::size_t na, const double* bx,
                        const double* by, std::size_t nb, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const __m256d px = _mm256_set1_pd(ax[i]);
    const __m256d py = _mm256_set1_pd(ay[i]);
    double* row = out + i * nb;
    std::size_t j = 0;
    for (; j + 4 <= nb; j += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(bx + j), px);
      const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(by + j), py);
      const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      _mm256_storeu_pd(row + j, _mm256_sqrt_pd(d2));
    }
    for (; j < nb; ++j) {
      const double dx = bx[j] - ax[i];
      const double dy = by[j] - ay[i];
      row[j] = std::sqrt(dx * dx + dy * dy);
    }
  }
}

}  // namespace vbmot::kernels::avx2
