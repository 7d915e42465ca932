#pragma once

// Internal backend entry points. Every backend evaluates the principal minors
// in the same operation order (mul/add/sub/sqrt, no FMA), so scalar and SIMD
// results are bit-identical and the equivalence tests can compare exactly.

#include "pqclone/kernels/feasibility_kernels.hpp"

namespace pqclone::kernels {

void classify_batch_scalar_impl(const CompiledFeasibility& cf, const double* const q[],
                                std::size_t count, PointClass* cls, double* dets);

#if defined(__x86_64__) || defined(_M_X64)
void classify_batch_avx2(const CompiledFeasibility& cf, const double* const q[],
                         std::size_t count, PointClass* cls, double* dets);
#endif

#if defined(__aarch64__)
void classify_batch_neon(const CompiledFeasibility& cf, const double* const q[],
                         std::size_t count, PointClass* cls, double* dets);
#endif

} // namespace pqclone::kernels
