#pragma once

// Shared helpers for the unit and acceptance suites: fixture paths, a
// deterministic random source (raw mt19937_64 bits so sequences do not depend
// on the standard library's distributions), random problem generators and the
// small independent oracles the tests freeze expected values from.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "pqclone/problem.hpp"

namespace testsup {

inline std::string fixture_path(const std::string& name) {
    return std::string(PQCLONE_FIXTURE_DIR) + "/" + name;
}

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(uint64_t seed) : engine(seed) {}

    double uniform() { // [0,1)
        return double(engine() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        // Box-Muller on raw uniforms keeps the stream portable
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::complex<double> complex_gaussian() {
        return {gaussian(), gaussian()};
    }
};

inline Eigen::VectorXcd random_unit_vector(Rng& rng, int dim) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
    v.normalize();
    return v;
}

inline pqclone::StateSet random_states(Rng& rng, int n, int dim) {
    while (true) {
        std::vector<Eigen::VectorXcd> states;
        for (int i = 0; i < n; ++i) states.push_back(random_unit_vector(rng, dim));
        try {
            return pqclone::StateSet::create(dim, std::move(states));
        } catch (const pqclone::Error&) {
            // nearly dependent draw; try again
        }
    }
}

inline pqclone::AlphaGram random_alpha(Rng& rng, int n) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = rng.complex_gaussian();
    }
    Eigen::MatrixXcd a = g * g.adjoint();
    Eigen::VectorXd d = a.diagonal().real();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) /= std::sqrt(d(i) * d(j));
        }
        a(i, i) = 1.0;
    }
    return pqclone::AlphaGram::create(a);
}

inline Eigen::VectorXd random_priors(Rng& rng, int n) {
    Eigen::VectorXd w(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        w(i) = rng.uniform(0.2, 1.0);
        sum += w(i);
    }
    w /= sum;
    w(n - 1) += 1.0 - w.sum(); // absorb rounding so the sum is exactly 1
    return w;
}

inline pqclone::CloningProblem random_problem(Rng& rng, int n, int dim, int m, int nn) {
    return pqclone::CloningProblem::create(random_states(rng, n, dim), m, nn,
                                           random_alpha(rng, n),
                                           random_priors(rng, n));
}

/// Two states in dim 2 with real overlap s >= 0.
inline pqclone::StateSet two_states_with_overlap(double s) {
    std::vector<Eigen::VectorXcd> states(2);
    states[0] = Eigen::Vector2cd(1.0, 0.0);
    states[1] = Eigen::Vector2cd(s, std::sqrt(1.0 - s * s));
    return pqclone::StateSet::create(2, std::move(states));
}

/// Real roots of t^3 + p t + r, descending. Independent oracle for the
/// symmetric three-state fixture, whose diagonal determinant is
/// q^3 - q + 1/3.
inline std::vector<double> depressed_cubic_roots(double p, double r) {
    const double a = std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * r / (2.0 * p * a), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    std::vector<double> roots;
    for (int k = 0; k < 3; ++k) {
        roots.push_back(2.0 * a * std::cos(theta - 2.0943951023931953 * k));
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

/// det of the 3x3 identification matrix with diagonal q and overlaps s_ij,
/// written out directly (the closed polynomial the boundary surface obeys).
inline double det3_identification(const Eigen::Vector3d& q,
                                  std::complex<double> s12,
                                  std::complex<double> s13,
                                  std::complex<double> s23) {
    return q(0) * q(1) * q(2) - q(0) * std::norm(s23) - q(1) * std::norm(s13) -
           q(2) * std::norm(s12) + 2.0 * (s12 * s23 * std::conj(s13)).real();
}

/// Largest root of q^3 - q + 1/3: the symmetric fixture's optimal failure
/// probability per state.
inline double symmetric_fixture_q() {
    return depressed_cubic_roots(-1.0, 1.0 / 3.0)[0];
}

} // namespace testsup
