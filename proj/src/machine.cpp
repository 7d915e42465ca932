#include "pqclone/machine.hpp"

#include <cmath>

#include "pqclone/philox.hpp"

namespace pqclone {

namespace {

Eigen::VectorXcd kron_power(const Eigen::VectorXcd& v, int copies) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Ones(1);
    for (int c = 0; c < copies; ++c) {
        Eigen::VectorXcd next(acc.size() * v.size());
        for (Eigen::Index i = 0; i < acc.size(); ++i) {
            next.segment(i * v.size(), v.size()) = acc(i) * v;
        }
        acc = std::move(next);
    }
    return acc;
}

} // namespace

double CloningMachine::success_weight(int state_index) const {
    const auto& out = outputs.at(state_index);
    const int flags = flag_dim();
    double w = 0.0;
    for (Eigen::Index h = 0; h < clone_dim; ++h) {
        for (int f = 0; f < n_success_flags; ++f) {
            w += std::norm(out(h * flags + f));
        }
    }
    return w;
}

CloningMachine construct(const CloningProblem& problem, const ParameterPoint& q,
                         double tol) {
    const FeasibilityReport report = check(problem, q, tol);
    if (!report.feasible) {
        fail("NotFeasible", "cloning is not realizable at the requested point");
    }
    const int n = problem.count();

    const Eigen::MatrixXcd alpha_factor =
        psd_factor(HermitianMatrix(problem.alpha().entries), tol);
    const FailGram fail_gram = recover_fail_gram(problem, q, tol);
    Eigen::MatrixXcd fail_factor(0, 0);
    if (!fail_gram.active.empty()) {
        fail_factor = psd_factor(HermitianMatrix(fail_gram.entries), tol);
    }

    CloningMachine machine;
    machine.dim = problem.states().dim;
    machine.m_copies = problem.m();
    machine.n_copies = problem.n();
    machine.input_dim = 1;
    for (int c = 0; c < problem.m(); ++c) machine.input_dim *= machine.dim;
    machine.clone_dim = 1;
    for (int c = 0; c < problem.n(); ++c) machine.clone_dim *= machine.dim;
    machine.n_success_flags = static_cast<int>(alpha_factor.cols());
    machine.n_fail_flags = static_cast<int>(fail_factor.cols());
    machine.p = q.p;
    machine.q = q.q;

    // kets realizing the Gram matrices: conjugated factor rows
    machine.success_flags = alpha_factor.conjugate();
    machine.fail_flags = Eigen::MatrixXcd::Zero(n, machine.n_fail_flags);
    for (int a = 0; a < static_cast<int>(fail_gram.active.size()); ++a) {
        machine.fail_flags.row(fail_gram.active[a]) = fail_factor.row(a).conjugate();
    }

    const int flags = machine.flag_dim();
    machine.outputs.resize(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(machine.clone_dim * flags);
        const double sp = std::sqrt(q.p(i));
        const double sq = std::sqrt(q.q(i));
        if (sp > 0.0) {
            const Eigen::VectorXcd clones = kron_power(problem.states().states[i],
                                                       problem.n());
            for (Eigen::Index h = 0; h < machine.clone_dim; ++h) {
                for (int f = 0; f < machine.n_success_flags; ++f) {
                    out(h * flags + f) = sp * clones(h) * machine.success_flags(i, f);
                }
            }
        }
        if (sq > 0.0) {
            // failure results live in the orthogonal flag block; the clone
            // component is pinned to the first basis vector
            for (int f = 0; f < machine.n_fail_flags; ++f) {
                out(machine.n_success_flags + f) += sq * machine.fail_flags(i, f);
            }
        }
        machine.outputs[i] = std::move(out);
    }

    machine.gram_deviation = verify_isometry(machine, problem.grams());
    if (machine.gram_deviation > 1e-8) {
        fail("NumericalGramMismatch",
             "output Gram deviates from x_m by " +
                 std::to_string(machine.gram_deviation));
    }
    return machine;
}

double verify_isometry(const CloningMachine& machine, const GramPair& grams) {
    const int n = static_cast<int>(machine.outputs.size());
    double dev = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const std::complex<double> inner = machine.outputs[i].dot(machine.outputs[j]);
            dev = std::max(dev, std::abs(inner - grams.x_m(i, j)));
        }
    }
    return dev;
}

SimulationResult simulate(const CloningMachine& machine, int state_index, long shots,
                          uint64_t seed) {
    const int n = static_cast<int>(machine.outputs.size());
    if (state_index < 0 || state_index >= n) {
        fail("InvariantViolation", "state index out of range");
    }
    if (shots < 1) {
        fail("InvariantViolation", "shots must be >= 1");
    }
    SimulationResult result;
    result.shots = shots;
    result.seed = seed;
    result.shots_run.assign(n, 0);
    result.success_counts.assign(n, 0);
    result.rates.assign(n, 0.0);

    const double p_success = machine.success_weight(state_index);
    long successes = 0;
    for (long shot = 0; shot < shots; ++shot) {
        const double u = Philox4x32::uniform(seed, uint32_t(state_index), uint64_t(shot));
        if (u < p_success) ++successes;
    }
    result.shots_run[state_index] = shots;
    result.success_counts[state_index] = successes;
    result.rates[state_index] = double(successes) / double(shots);
    return result;
}

SimulationResult simulate_all(const CloningMachine& machine, long shots,
                              uint64_t seed) {
    const int n = static_cast<int>(machine.outputs.size());
    SimulationResult result;
    result.shots = shots;
    result.seed = seed;
    result.shots_run.assign(n, 0);
    result.success_counts.assign(n, 0);
    result.rates.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const SimulationResult one = simulate(machine, i, shots, seed);
        result.shots_run[i] = one.shots_run[i];
        result.success_counts[i] = one.success_counts[i];
        result.rates[i] = one.rates[i];
    }
    return result;
}

} // namespace pqclone
