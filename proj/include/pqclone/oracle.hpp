#pragma once

#include "pqclone/optimize.hpp"
#include "pqclone/problem.hpp"

namespace pqclone {

/// Uniform grid over [0,1]^N with both endpoints on every axis.
struct GridSpec {
    double step = 0.01;

    static GridSpec create(double step);

    /// Axis values 0, step, 2*step, ..., 1 (the endpoint is forced to 1).
    std::vector<double> axis() const;
};

/// Exhaustive feasibility sweep (is_psd of M(q) at every grid point) returning
/// the minimum-Q feasible point. N <= 4; certificate is always Degenerate-free
/// information only to the extent a grid point carries one, so it is reported
/// as Degenerate with converged = true.
Optimum grid_optimum(const CloningProblem& problem, const GridSpec& grid,
                     double tol = kPsdTol);

struct CensusResult {
    long feasible = 0;
    long infeasible = 0;
    long near_surface = 0;       // |det| within the resolution-aware band
    double near_band = 0.0;
    bool single_component = false; // all feasible points reachable from (1,..,1)
    long component_size = 0;
};

/// Classify every grid point and verify the feasible set is one grid-connected
/// component containing (1,...,1). N <= 3.
CensusResult region_census(const CloningProblem& problem, const GridSpec& grid,
                           double tol = kPsdTol);

} // namespace pqclone
