#pragma once

#include <span>
#include <string_view>
#include <vector>

// Flat double-precision kernels for the reduction and accumulation loops in
// the samplers: trace inner products, residual sums of squares, running-sum
// accumulation of posterior means.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// picked once per process from CPUID, or forced with the environment variable
// STIEFEL_MCMC_KERNELS=scalar|avx2|neon. Variants agree with the reference up
// to floating-point reassociation in the reductions.

namespace stiefel::simd {

struct KernelTable {
  std::string_view name;
  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  /// sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  /// dst[i] += alpha * src[i]
  void (*axpy)(double alpha, const double* src, double* dst, std::size_t n);
};

const KernelTable& scalar_kernels();
/// Every variant compiled into this binary that the running CPU supports,
/// scalar first.
std::vector<const KernelTable*> available_kernels();
/// Variant used by the free functions below.
const KernelTable& active_kernels();

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
void axpy(double alpha, std::span<const double> src, std::span<double> dst);

}  // namespace stiefel::simd
