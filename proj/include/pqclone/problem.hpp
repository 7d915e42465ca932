#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pqclone/hermitian.hpp"

namespace pqclone {

/// N known pure states in a d-dimensional space. Immutable after creation;
/// create() enforces unit norms, N >= 2, dim >= N and linear independence
/// (smallest Gram eigenvalue > 1e-10).
struct StateSet {
    int dim = 0;
    std::vector<Eigen::VectorXcd> states;

    static StateSet create(int dim, std::vector<Eigen::VectorXcd> states);

    /// Synthesize a StateSet from a Gram matrix alone: any factor G = F^dagger F
    /// with the columns of F as states reproduces the inner products. For use
    /// when only the optimizer is needed and no physical vectors exist.
    static StateSet from_gram(const Eigen::MatrixXcd& gram);

    int count() const { return static_cast<int>(states.size()); }
};

/// Success-flag overlap matrix [<alpha_i|alpha_j>]: Hermitian, unit diagonal,
/// PSD, entries bounded by 1 in magnitude. The identity encodes identification.
struct AlphaGram {
    Eigen::MatrixXcd entries;

    static AlphaGram create(const Eigen::MatrixXcd& entries);
    static AlphaGram identity(int n);

    bool is_identity() const;
};

/// Pair of derived Gram matrices: x_mimes = [s_ij^m] and
/// x_n_p = [s_ij^n * alpha_ij]. Both Hermitian with exactly unit diagonal.
struct GramPair {
    Eigen::MatrixXcd x_m;
    Eigen::MatrixXcd x_n_p;
};

/// Full problem instance: states, copy counts m < n, success-flag overlaps and
/// strictly positive priors summing to one. Identification is the special case
/// alpha = identity. Immutable; Gram matrices are precomputed at creation.
class CloningProblem {
public:
    static CloningProblem create(StateSet states, int m, int n, AlphaGram alpha,
                                 Eigen::VectorXd priors);

    const StateSet& states() const { return states_; }
    int m() const { return m_; }
    int n() const { return n_; }
    const AlphaGram& alpha() const { return alpha_; }
    const Eigen::VectorXd& priors() const { return priors_; }
    const GramPair& grams() const { return grams_; }
    int count() const { return states_.count(); }

    /// Spectral norm of x_m, cached for tolerance scaling.
    double x_m_norm() const { return x_m_norm_; }

    /// Scale for the det-based surface tolerance: max(1, ||x_m||^N).
    double surface_scale() const { return surface_scale_; }

private:
    CloningProblem() = default;

    StateSet states_;
    int m_ = 1;
    int n_ = 2;
    AlphaGram alpha_;
    Eigen::VectorXd priors_;
    GramPair grams_;
    double x_m_norm_ = 1.0;
    double surface_scale_ = 1.0;
};

/// Matrix of pairwise overlaps S_ij = <Psi_i|Psi_j> (conjugate-linear in the
/// first argument). Hermitian with exactly unit diagonal.
Eigen::MatrixXcd compute_overlaps(const StateSet& states);

/// Entrywise powers: x_m = [s_ij^m], x_n_p = [s_ij^n * alpha_ij].
GramPair build_grams(const Eigen::MatrixXcd& overlaps, int m, int n,
                     const AlphaGram& alpha);
GramPair build_grams(const CloningProblem& problem);

/// Load a problem from the JSON schema:
///   { "dim": int, "states": [[[re,im],...],...], "m": int, "n": int,
///     "alpha": [[[re,im],...],...] (optional, default identity),
///     "priors": [float,...] (optional, default uniform) }
CloningProblem load_problem(const std::string& path);

/// Inverse of load_problem; doubles round-trip bit-exactly.
void save_problem(const CloningProblem& problem, const std::string& path);

} // namespace pqclone
