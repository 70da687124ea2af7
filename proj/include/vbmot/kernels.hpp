#pragma once

// Data-parallel inner loops with a scalar reference path and an AVX2 path.
// The public entry points dispatch on the backend detected at first use;
// set_backend() pins one for equivalence tests and benchmarking.

#include <cstddef>
#include <span>
#include <string_view>

namespace vbmot::kernels {

enum class Backend { scalar, avx2 };

bool backend_supported(Backend b);
Backend active_backend();
/// Throws std::invalid_argument if `b` is not supported on this CPU/build.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

/// sum_k sqrt(a_k * b_k). Spans must have equal length.
double bhattacharyya_coefficient(std::span<const double> a, std::span<const double> b);

/// out[r] = coefficient(ref, rows[r*B .. r*B+B)), B = ref.size().
void bhattacharyya_coefficients(std::span<const double> ref, std::span<const double> rows,
                                std::span<double> out);

/// out[i*nb + j] = |(ax_i, ay_i) - (bx_j, by_j)|.
void pairwise_distances(std::span<const double> ax, std::span<const double> ay,
                        std::span<const double> bx, std::span<const double> by,
                        std::span<double> out);

namespace scalar {
double bhattacharyya_coefficient(const double* a, const double* b, std::size_t n);
void pairwise_distances(const double* ax, const double* ay, std::size_t na, const double* bx,
                        const double* by, std::size_t nb, double* out);
}  // namespace scalar

#if defined(VBMOT_HAVE_AVX2)
namespace avx2 {
double bhattacharyya_coefficient(const double* a, const double* b, std::size_t n);
void pairwise_distances(const double* ax, const double* ay, std::size_t na, const double* bx,
                        const double* by, std::size_t nb, double* out);
}  // namespace avx2
#endif

}  // namespace vbmot::kernels
