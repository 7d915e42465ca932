#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pqclone/hermitian.hpp"
#include "pqclone/problem.hpp"

namespace pqclone {

/// Failure-probability vector q in [0,1]^N with the derived success
/// probabilities p = 1 - q stored alongside, so q_i + p_i == 1 holds exactly.
struct ParameterPoint {
    Eigen::VectorXd q;
    Eigen::VectorXd p;

    static ParameterPoint create(Eigen::VectorXd q);
    static ParameterPoint ones(int n);
    static ParameterPoint zeros(int n);

    int size() const { return static_cast<int>(q.size()); }
};

struct FeasibilityReport {
    HermitianMatrix matrix;  // M(q)
    bool feasible = false;
    double min_eig = 0.0;
    double det = 0.0;
    bool on_surface = false; // |det| below the problem's surface tolerance
};

/// Failure-flag Gram Y_ij = <fail_i|fail_j>, recovered on the indices with
/// q_i > 0. Rows with q_i = 0 have no failure branch; for those the off-block
/// identity x_m = sqrt(p_i p_j) x_n_p is verified instead and the worst
/// deviation reported.
struct FailGram {
    Eigen::MatrixXcd entries;   // |active| x |active|
    std::vector<int> active;    // indices with q_i > 0, ascending
    bool valid = false;         // PSD with unit diagonal (and off-block consistent)
    double off_block_deviation = 0.0;
};

/// M(q) = x_m - sqrt(Gamma) x_n_p sqrt(Gamma). The diagonal equals q exactly.
HermitianMatrix build_m(const GramPair& grams, const ParameterPoint& q);

/// Theorem-2 realizability test at q, with determinant and surface indicator.
FeasibilityReport check(const CloningProblem& problem, const ParameterPoint& q,
                        double tol = kPsdTol);

/// Recover Y from the unitarity identity. valid tracks check(...).feasible
/// whenever all q_i > 0.
FailGram recover_fail_gram(const CloningProblem& problem, const ParameterPoint& q,
                           double tol = kPsdTol);

/// Walk from the always-feasible anchor (1,...,1) along -direction (all
/// components strictly positive) and return the farthest point that is still
/// feasible: a boundary point of the feasible set, or a cube-face point when
/// the ray exits through a face first. Bisection to |dt| <= 1e-12.
ParameterPoint boundary_along_ray(const CloningProblem& problem,
                                  const Eigen::VectorXd& direction,
                                  double tol = kPsdTol);

/// Sample `samples` evenly spaced points on the segment from q_from to
/// (1,...,1), endpoints included; true iff all are feasible.
bool segment_feasible(const CloningProblem& problem, const ParameterPoint& q_from,
                      int samples, double tol = kPsdTol);

namespace detail {

/// General form M(q) = a - sqrt(Gamma) b sqrt(Gamma) with a Hermitian positive
/// definite and b Hermitian PSD. The public problem case is a = x_m,
/// b = x_n_p; cube-face reductions produce non-unit diagonals.
struct SurfaceForm {
    Eigen::MatrixXcd a;
    Eigen::MatrixXcd b;
};

SurfaceForm surface_form(const CloningProblem& problem);

HermitianMatrix build_m_general(const SurfaceForm& form, const Eigen::VectorXd& q);
bool feasible(const SurfaceForm& form, const Eigen::VectorXd& q, double tol);
double det_m(const SurfaceForm& form, const Eigen::VectorXd& q);

struct RayHit {
    double t = 0.0;
    Eigen::VectorXd q;
    bool on_cube = false; // ray left the cube before leaving the feasible set
};

/// Ray search used by boundary_along_ray, surface meshing and the optimizer.
RayHit boundary_ray(const SurfaceForm& form, const Eigen::VectorXd& direction,
                    double tol, int bisect_iters = 60);

} // namespace detail

} // namespace pqclone
