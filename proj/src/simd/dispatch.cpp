#include <cstdlib>
#include <string_view>

#include "kernels.hpp"
#include "stiefel/errors.hpp"

namespace stiefel::simd {
namespace {

bool cpu_has_avx2() {
#if defined(STIEFEL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select_kernels() {
  const auto candidates = available_kernels();
  if (const char* forced = std::getenv("STIEFEL_MCMC_KERNELS"); forced != nullptr && *forced) {
    for (const KernelTable* k : candidates) {
      if (k->name == std::string_view(forced)) return *k;
    }
    // Unknown or unsupported request: fall back to the reference kernels.
    return detail::kScalarKernels;
  }
  return *candidates.back();
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("simd kernel: operand lengths differ");
}

}  // namespace

const KernelTable& scalar_kernels() { return detail::kScalarKernels; }

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&detail::kScalarKernels};
#if defined(STIEFEL_HAVE_AVX2)
  if (cpu_has_avx2()) out.push_back(&detail::kAvx2Kernels);
#endif
#if defined(STIEFEL_HAVE_NEON)
  out.push_back(&detail::kNeonKernels);
#endif
  return out;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  return active_kernels().dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size());
  return active_kernels().squared_distance(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return active_kernels().sum(a.data(), a.size()); }

void axpy(double alpha, std::span<const double> src, std::span<double> dst) {
  check_same_size(src.size(), dst.size());
  active_kernels().axpy(alpha, src.data(), dst.data(), src.size());
}

}  // namespace stiefel::simd
