#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>

namespace pqclone::kernels {

/// Conservative classification of one parameter point. Decisive labels agree
/// with the eigenvalue-based is_psd: a principal minor <= -band rules PSD out
/// with margin, all minors >= +band prove positive definiteness. Points whose
/// minors fall inside the band are Uncertain and the caller resolves them with
/// the exact test.
enum class PointClass : uint8_t { Infeasible = 0, Feasible = 1, Uncertain = 2 };

/// Upper-triangle constants of x_m and x_n_p packed for the N <= 4 sweep
/// kernels. Pairs (i,j) with i < j are stored in row-major order, e.g.
/// N = 3 -> (0,1),(0,2),(1,2).
struct CompiledFeasibility {
    int n = 0;
    double xm_re[6] = {};
    double xm_im[6] = {};
    double xnp_re[6] = {};
    double xnp_im[6] = {};
    double band = 1e-6;

    static CompiledFeasibility pack(const Eigen::MatrixXcd& x_m,
                                    const Eigen::MatrixXcd& x_n_p,
                                    double band = 1e-6);
};

/// Classify `count` points q given as one array per coordinate (all q in
/// [0,1]). dets receives det M(q); cls the conservative classification.
/// Dispatches to the best backend for the running CPU.
void classify_batch(const CompiledFeasibility& cf, const double* const q[],
                    std::size_t count, PointClass* cls, double* dets);

/// Scalar reference path, always available.
void classify_batch_scalar(const CompiledFeasibility& cf, const double* const q[],
                           std::size_t count, PointClass* cls, double* dets);

/// Name of the backend classify_batch currently dispatches to:
/// "scalar", "avx2" or "neon".
const char* active_backend();

/// Force a backend by name ("scalar", "avx2", "neon"); "auto" or nullptr
/// restores CPU dispatch. Throws on unknown or unavailable names. The
/// PQCLONE_KERNEL environment variable applies the same override at startup.
void force_backend(const char* name);

} // namespace pqclone::kernels
