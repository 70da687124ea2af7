#include "doctest.h"
#include "vbmot/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace vbmot::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar coefficient against a direct sum") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u}) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    double want = 0.0;
    for (std::size_t k = 0; k < n; ++k) want += std::sqrt(a[k] * b[k]);
    CHECK(scalar::bhattacharyya_coefficient(a.data(), b.data(), n) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("backend selection") {
  CHECK(backend_supported(Backend::scalar));
  const Backend before = active_backend();
  set_backend(Backend::scalar);
  CHECK(active_backend() == Backend::scalar);
  if (!backend_supported(Backend::avx2)) CHECK_THROWS_AS(set_backend(Backend::avx2), std::invalid_argument);
  set_backend(before);
  CHECK(backend_name(Backend::scalar) == "scalar");
}

TEST_CASE("dispatch entry points agree across backends") {
  std::mt19937_64 rng(2);
  const Backend before = active_backend();
  for (std::size_t bins : {1u, 5u, 8u, 16u, 19u}) {
    const auto ref = random_vec(rng, bins);
    const auto rows = random_vec(rng, bins * 37);
    std::vector<double> s(37), v(37);
    set_backend(Backend::scalar);
    bhattacharyya_coefficients(ref, rows, s);
    if (backend_supported(Backend::avx2)) {
      set_backend(Backend::avx2);
      bhattacharyya_coefficients(ref, rows, v);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - v[i]) <= 1e-13 * std::max(1.0, s[i]));
    }
  }
  set_backend(before);
  CHECK_THROWS_AS(bhattacharyya_coefficient(std::vector<double>(3), std::vector<double>(4)), std::invalid_argument);
}

#if defined(VBMOT_HAVE_AVX2)
TEST_CASE("avx2 kernels equal scalar kernels") {
  if (!backend_supported(Backend::avx2)) return;
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n < 70; ++n) {
    const auto a = random_vec(rng, n), b = random_vec(rng, n);
    const double s = scalar::bhattacharyya_coefficient(a.data(), b.data(), n);
    const double v = avx2::bhattacharyya_coefficient(a.data(), b.data(), n);
    CHECK(std::abs(s - v) <= 1e-13 * std::max(1.0, s));
  }
  for (std::size_t na : {0u, 1u, 4u, 9u}) {
    for (std::size_t nb : {0u, 1u, 3u, 4u, 13u}) {
      const auto ax = random_vec(rng, na), ay = random_vec(rng, na), bx = random_vec(rng, nb), by = random_vec(rng, nb);
      std::vector<double> s(na * nb), v(na * nb);
      scalar::pairwise_distances(ax.data(), ay.data(), na, bx.data(), by.data(), nb, s.data());
      avx2::pairwise_distances(ax.data(), ay.data(), na, bx.data(), by.data(), nb, v.data());
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - v[i]) <= 1e-14);
      for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
          CHECK(s[i * nb + j] == doctest::Approx(std::hypot(ax[i] - bx[j], ay[i] - by[j])).epsilon(1e-14));
    }
  }
}
#endif
