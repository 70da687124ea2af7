#include "vbmot/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace vbmot::kernels {

namespace {

Backend detect() {
#if defined(VBMOT_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}

}  // namespace

bool backend_supported(Backend b) {
  if (b == Backend::scalar) return true;
#if defined(VBMOT_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) throw std::invalid_argument("kernel backend not supported here");
  current().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

double bhattacharyya_coefficient(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("histogram dimensions differ");
#if defined(VBMOT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::bhattacharyya_coefficient(a.data(), b.data(), a.size());
#endif
  return scalar::bhattacharyya_coefficient(a.data(), b.data(), a.size());
}

void bhattacharyya_coefficients(std::span<const double> ref, std::span<const double> rows,
                                std::span<double> out) {
  const std::size_t bins = ref.size();
  if (bins == 0 || rows.size() != out.size() * bins)
    throw std::invalid_argument("row block does not match reference dimension");
  auto* fn = &scalar::bhattacharyya_coefficient;
#if defined(VBMOT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) fn = &avx2::bhattacharyya_coefficient;
#endif
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = fn(ref.data(), rows.data() + r * bins, bins);
}

void pairwise_distances(std::span<const double> ax, std::span<const double> ay,
                        std::span<const double> bx, std::span<const double> by,
                        std::span<double> out) {
  if (ax.size() != ay.size() || bx.size() != by.size() || out.size() != ax.size() * bx.size())
    throw std::invalid_argument("pairwise_distances: size mismatch");
#if defined(VBMOT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    avx2::pairwise_distances(ax.data(), ay.data(), ax.size(), bx.data(), by.data(), bx.size(), out.data());
    return;
  }
#endif
  scalar::pairwise_distances(ax.data(), ay.data(), ax.size(), bx.data(), by.data(), bx.size(), out.data());
}

}  // namespace vbmot::kernels
