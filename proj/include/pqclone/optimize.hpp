#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pqclone/feasibility.hpp"
#include "pqclone/problem.hpp"

namespace pqclone {

enum class Certificate { SurfaceTangent, CubeFace, Degenerate };

const char* certificate_name(Certificate c);

/// Result of a failure-probability minimization. q_star is always feasible and
/// Q = priors . q_star. SurfaceTangent certifies an interior tangency of the
/// prior-orthogonal plane with the det = 0 boundary; CubeFace marks optima
/// with coordinates pinned at 0 or 1; Degenerate reports the best point found
/// without a certificate (also used on non-convergence).
struct Optimum {
    ParameterPoint q_star;
    double Q = 0.0;
    double success = 1.0;
    Certificate certificate = Certificate::Degenerate;
    double det_at_opt = 0.0;
    double gradient_residual = 0.0; // NaN when tangency does not apply
    bool converged = false;
};

struct OptimizeOptions {
    int multistart = 0;           // 0 selects the default 8 * 2^N (at least 64)
    double psd_tol = kPsdTol;
    double kkt_residual_tol = 1e-6;
    double fd_step = 1e-6;        // central-difference step for grad det
    int bisect_iters = 60;
    int refine_iters = 200;       // simplex refinement budget
};

/// Minimize Q = priors . q over the realizable set. Multistart ray search from
/// the all-ones anchor, simplex refinement of the ray direction, then a damped
/// Newton polish of the tangency system {det M(q) = 0, grad det || priors},
/// recursing onto cube faces when coordinates pin at the bounds.
Optimum optimize(const CloningProblem& problem, const OptimizeOptions& options = {});

/// Exact two-state solver on the curve
///   |s|^m = sqrt(p1 p2) |alpha| |s|^n + sqrt(q1 q2),
/// parametrized in q1 and minimized by scan + golden section + Newton polish.
Optimum optimize_two(const StateSet& states, int m, int n, double alpha_mag,
                     const Eigen::Vector2d& priors,
                     const OptimizeOptions& options = {});

/// Convenience overload reading |s|, m, n, |alpha_12| and priors from the
/// problem (alpha = identity gives the identification constraint |s|^m =
/// sqrt(q1 q2)).
Optimum optimize_two(const CloningProblem& problem,
                     const OptimizeOptions& options = {});

/// Identification fast path: optimize with alpha = identity. Results for
/// m > 1 generalize the single-copy geometry (the CLI flags them as such).
Optimum identify(const StateSet& states, const Eigen::VectorXd& priors, int m = 1,
                 const OptimizeOptions& options = {});

/// Boundary points of the realizable set along a resolution x resolution grid
/// of positive-octant directions (N = 3 only). Each point satisfies
/// det M = 0 up to the ray tolerance or lies on a cube face.
std::vector<ParameterPoint> surface_mesh(const CloningProblem& problem,
                                         int resolution,
                                         const OptimizeOptions& options = {});

namespace detail {

/// Core search on a SurfaceForm with arbitrary positive objective weights.
/// Exposed for the weight-scaling invariance test.
Optimum optimize_surface(const SurfaceForm& form, const Eigen::VectorXd& weights,
                         const OptimizeOptions& options, double surface_scale);

} // namespace detail

} // namespace pqclone
