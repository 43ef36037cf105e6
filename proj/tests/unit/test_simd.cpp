#include <cmath>
#include <doctest.h>
#include <vector>

#include "stiefel/errors.hpp"
#include "stiefel/rng.hpp"
#include "stiefel/simd.hpp"

using stiefel::Rng;
namespace simd = stiefel::simd;

namespace {

std::vector<double> random_values(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal(0.0, 3.0);
  return v;
}

double abs_sum_of_products(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]);
  return s;
}

}  // namespace

TEST_CASE("every kernel variant matches the scalar reference") {
  const auto& ref = simd::scalar_kernels();
  Rng rng(7);
  for (const simd::KernelTable* k : simd::available_kernels()) {
    CAPTURE(k->name);
    // Lengths cover empty input, partial vectors and the unrolled main loop.
    for (std::size_t n = 0; n <= 67; ++n) {
      CAPTURE(n);
      const auto a = random_values(n, rng);
      const auto b = random_values(n, rng);
      const double scale = abs_sum_of_products(a, b) + 1e-300;

      CHECK(std::abs(k->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= 1e-14 * scale + 1e-300);

      double sq_scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) sq_scale += (a[i] - b[i]) * (a[i] - b[i]);
      CHECK(std::abs(k->squared_distance(a.data(), b.data(), n) - ref.squared_distance(a.data(), b.data(), n)) <=
            1e-14 * sq_scale + 1e-300);

      double abs_sum = 0.0;
      for (double x : a) abs_sum += std::abs(x);
      CHECK(std::abs(k->sum(a.data(), n) - ref.sum(a.data(), n)) <= 1e-14 * abs_sum + 1e-300);

      std::vector<double> dst_k = b, dst_ref = b;
      k->axpy(0.37, a.data(), dst_k.data(), n);
      ref.axpy(0.37, a.data(), dst_ref.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(dst_k[i] - dst_ref[i]) <= 1e-15 * (std::abs(dst_ref[i]) + std::abs(0.37 * a[i])));
      }
    }
  }
}

TEST_CASE("kernels are exact on small integers") {
  // Integer-valued inputs have exact sums in any order.
  std::vector<double> a(37), b(37);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<double>(i % 7) - 3.0;
    b[i] = static_cast<double>(i % 5);
  }
  for (const simd::KernelTable* k : simd::available_kernels()) {
    CAPTURE(k->name);
    double dot = 0.0, sq = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dot += a[i] * b[i];
      sq += (a[i] - b[i]) * (a[i] - b[i]);
      sum += a[i];
    }
    CHECK(k->dot(a.data(), b.data(), a.size()) == dot);
    CHECK(k->squared_distance(a.data(), b.data(), a.size()) == sq);
    CHECK(k->sum(a.data(), a.size()) == sum);
  }
}

TEST_CASE("active kernel is one of the available variants") {
  bool found = false;
  for (const simd::KernelTable* k : simd::available_kernels()) found |= (k == &simd::active_kernels());
  CHECK(found);
  CHECK(simd::available_kernels().front()->name == "scalar");
}

TEST_CASE("span wrappers reject mismatched lengths") {
  std::vector<double> a(4, 1.0), b(5, 1.0);
  CHECK_THROWS_AS(simd::dot(a, b), stiefel::DimensionError);
  CHECK_THROWS_AS(simd::squared_distance(a, b), stiefel::DimensionError);
  CHECK_THROWS_AS(simd::axpy(1.0, a, b), stiefel::DimensionError);
  CHECK(simd::sum(a) == 4.0);
}
