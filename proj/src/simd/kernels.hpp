#pragma once

#include "qstates/simd.hpp"

namespace qstates::simd::detail {

extern const KernelTable kScalarKernels;
#if defined(QSTATES_HAS_AVX2)
extern const KernelTable kAvx2Kernels;
#endif

}  // namespace qstates::simd::detail
