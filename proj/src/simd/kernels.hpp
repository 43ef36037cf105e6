#pragma once

#include "stiefel/simd.hpp"

namespace stiefel::simd::detail {

extern const KernelTable kScalarKernels;
#if defined(STIEFEL_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(STIEFEL_HAVE_NEON)
extern const KernelTable kNeonKernels;
#endif

}  // namespace stiefel::simd::detail
