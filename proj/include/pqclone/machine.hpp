#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "pqclone/feasibility.hpp"
#include "pqclone/problem.hpp"

namespace pqclone {

/// Explicit cloning transformation restricted to the span of the inputs.
/// Output vector i lives in H^(tensor n) (x) flag space and equals
///   sqrt(p_i) |Psi_i>^(x)n (x) |alpha_i>  +  sqrt(q_i) |fail_i>,
/// with the success flags indexed before the failure flags. The restriction
/// preserves the Gram matrix x_m, so it extends to a full unitary (the
/// extension is never materialized).
struct CloningMachine {
    int dim = 0;       // single-copy Hilbert dimension d
    int m_copies = 1;
    int n_copies = 2;
    Eigen::Index input_dim = 0;        // d^m
    Eigen::Index clone_dim = 0;        // d^n
    int n_success_flags = 0;           // flag indices [0, n_success_flags)
    int n_fail_flags = 0;              // flag indices [n_success_flags, flag_dim)
    std::vector<Eigen::VectorXcd> outputs; // one per input state, unit norm
    Eigen::MatrixXcd success_flags;    // N x r_suc, row i = |alpha_i>
    Eigen::MatrixXcd fail_flags;       // N x r_fail, zero row when q_i = 0
    Eigen::VectorXd p;                 // success probabilities
    Eigen::VectorXd q;
    double gram_deviation = 0.0;       // max |<out_i|out_j> - x_m_ij| at build

    int flag_dim() const { return n_success_flags + n_fail_flags; }
    Eigen::Index output_dim() const { return clone_dim * flag_dim(); }

    /// Squared norm of the success-flag block of output i (the Born
    /// probability the simulator samples from).
    double success_weight(int state_index) const;
};

/// Build the machine at a feasible point. Flags come from PSD factorizations
/// of the alpha Gram and of the recovered failure Gram; the build verifies
/// Gram preservation and refuses with NumericalGramMismatch above 1e-8.
CloningMachine construct(const CloningProblem& problem, const ParameterPoint& q,
                         double tol = kPsdTol);

/// Max deviation |<out_i|out_j> - x_m_ij|; zero means the restriction extends
/// to an exact unitary.
double verify_isometry(const CloningMachine& machine, const GramPair& grams);

struct SimulationResult {
    long shots = 0;                  // requested shots per sampled state
    std::vector<long> shots_run;     // per state; zero for unsampled states
    std::vector<long> success_counts;
    std::vector<double> rates;       // success_counts / shots_run (0 if unsampled)
    uint64_t seed = 0;
};

/// Sample the success/failure flag measurement for one input state with Born
/// probability taken from the machine's output vector (not from the requested
/// q). Deterministic given the seed; draws are indexed by (state, shot), so
/// sharded runs merge to identical counts.
SimulationResult simulate(const CloningMachine& machine, int state_index,
                          long shots, uint64_t seed);

/// Convenience: sample every input state.
SimulationResult simulate_all(const CloningMachine& machine, long shots,
                              uint64_t seed);

} // namespace pqclone
