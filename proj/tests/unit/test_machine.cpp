#include <doctest.h>

#include <cmath>

#include "pqclone/machine.hpp"
#include "pqclone/optimize.hpp"
#include "test_support.hpp"

using namespace pqclone;
using testsup::Rng;

namespace {

CloningProblem symmetric_fixture() {
    return load_problem(testsup::fixture_path("three_symmetric.json"));
}

} // namespace

TEST_SUITE("machine") {

TEST_CASE("machine at the symmetric optimum preserves the gram") {
    const CloningProblem problem = symmetric_fixture();
    const double t = testsup::symmetric_fixture_q();
    const ParameterPoint q =
        ParameterPoint::create(Eigen::VectorXd::Constant(3, t));
    const CloningMachine machine = construct(problem, q);

    CHECK(machine.n_success_flags == 3); // identity alpha: orthonormal flags
    CHECK(machine.gram_deviation <= 1e-10);
    CHECK(verify_isometry(machine, problem.grams()) <= 1e-10);

    for (int i = 0; i < 3; ++i) {
        CHECK(machine.outputs[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(machine.success_weight(i) == doctest::Approx(1.0 - t).epsilon(1e-10));
    }

    // success flags realize the identity gram
    const Eigen::MatrixXcd flag_gram =
        machine.success_flags.conjugate() * machine.success_flags.transpose();
    CHECK((flag_gram - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <=
          1e-12);
}

TEST_CASE("all-ones machine is pure failure with gram x_m") {
    const CloningProblem problem = symmetric_fixture();
    const CloningMachine machine = construct(problem, ParameterPoint::ones(3));
    for (int i = 0; i < 3; ++i) {
        CHECK(machine.success_weight(i) <= 1e-14);
    }
    const Eigen::MatrixXcd fail_gram =
        machine.fail_flags.conjugate() * machine.fail_flags.transpose();
    CHECK((fail_gram - problem.grams().x_m).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("two-state optimal cloning machine has parallel failure flags") {
    const StateSet states = testsup::two_states_with_overlap(0.5);
    Eigen::MatrixXcd alpha(2, 2);
    alpha << 1.0, 1.0, 1.0, 1.0;
    const CloningProblem problem = CloningProblem::create(
        states, 1, 2, AlphaGram::create(alpha), Eigen::Vector2d(0.5, 0.5));
    const Optimum opt = optimize_two(problem);
    const CloningMachine machine = construct(problem, opt.q_star);

    const FailGram y = recover_fail_gram(problem, opt.q_star);
    REQUIRE(y.active.size() == 2);
    CHECK(std::abs(std::abs(y.entries(0, 1)) - 1.0) <= 1e-8);
    CHECK(machine.n_fail_flags == 1); // rank-one failure gram: parallel flags
    CHECK(machine.gram_deviation <= 1e-10);
}

TEST_CASE("construct refuses infeasible points") {
    const CloningProblem problem = symmetric_fixture();
    const double t = testsup::depressed_cubic_roots(-1.0, 1.0 / 3.0)[1];
    const ParameterPoint q =
        ParameterPoint::create(Eigen::VectorXd::Constant(3, t));
    CHECK_THROWS_WITH_AS(construct(problem, q), doctest::Contains("NotFeasible"),
                         Error);
}

TEST_CASE("tampered success amplitudes are caught by the isometry check") {
    const CloningProblem problem = symmetric_fixture();
    const double t = testsup::symmetric_fixture_q();
    CloningMachine machine =
        construct(problem, ParameterPoint::create(Eigen::VectorXd::Constant(3, t)));
    machine.outputs[0] *= std::sqrt(0.9); // wrong p for state 0
    CHECK(verify_isometry(machine, problem.grams()) > 1e-3);
}

TEST_CASE("construct succeeds exactly on the feasible side") {
    Rng rng(1618);
    int built = 0, refused = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 3;
        const CloningProblem problem = testsup::random_problem(rng, n, n, 1, 2);
        Eigen::VectorXd qv(n);
        for (int i = 0; i < n; ++i) qv(i) = rng.uniform();
        const ParameterPoint q = ParameterPoint::create(qv);
        const FeasibilityReport report = check(problem, q);
        if (std::abs(report.det) <= 1e-7 * problem.surface_scale()) continue;
        if (report.feasible) {
            const CloningMachine machine = construct(problem, q);
            CHECK(verify_isometry(machine, problem.grams()) <= 1e-10);
            ++built;
        } else {
            CHECK_THROWS_AS(construct(problem, q), Error);
            ++refused;
        }
    }
    CHECK(built > 5);
    CHECK(refused > 5);
}

TEST_CASE("output projections split into p and q weights") {
    Rng rng(2020);
    for (int trial = 0; trial < 10; ++trial) {
        const CloningProblem problem = testsup::random_problem(rng, 3, 3, 1, 2);
        Eigen::VectorXd qv(3);
        for (int i = 0; i < 3; ++i) qv(i) = rng.uniform();
        const ParameterPoint q = ParameterPoint::create(qv);
        if (!check(problem, q).feasible) continue;
        const CloningMachine machine = construct(problem, q);
        for (int i = 0; i < 3; ++i) {
            CHECK(machine.success_weight(i) ==
                  doctest::Approx(q.p(i)).epsilon(1e-10));
            const double fail_weight =
                machine.outputs[i].squaredNorm() - machine.success_weight(i);
            CHECK(fail_weight == doctest::Approx(q.q(i)).epsilon(1e-10));
        }
    }
}

TEST_CASE("simulation is deterministic and respects trivial machines") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("orthonormal.json"));

    // q = 0: every shot succeeds
    const CloningMachine free_machine = construct(problem, ParameterPoint::zeros(3));
    const SimulationResult all_success = simulate(free_machine, 0, 2000, 99);
    CHECK(all_success.success_counts[0] == 2000);
    CHECK(all_success.shots_run[0] == 2000);

    // q = 1: every shot fails
    const CloningMachine fail_machine = construct(problem, ParameterPoint::ones(3));
    const SimulationResult all_fail = simulate(fail_machine, 1, 2000, 99);
    CHECK(all_fail.success_counts[1] == 0);

    const SimulationResult a = simulate(free_machine, 2, 500, 31337);
    const SimulationResult b = simulate(free_machine, 2, 500, 31337);
    CHECK(a.success_counts[2] == b.success_counts[2]);
    CHECK(a.seed == b.seed);
}

TEST_CASE("empirical rates converge to the machine probabilities") {
    const CloningProblem problem = symmetric_fixture();
    const double t = testsup::symmetric_fixture_q();
    const CloningMachine machine =
        construct(problem, ParameterPoint::create(Eigen::VectorXd::Constant(3, t)));
    const long shots = 100000;
    const SimulationResult result = simulate_all(machine, shots, 7777);
    for (int i = 0; i < 3; ++i) {
        const double p = machine.success_weight(i);
        const double band = 4.0 * std::sqrt(p * (1.0 - p) / double(shots));
        CHECK(std::abs(result.rates[i] - p) <= band);
        CHECK(result.success_counts[i] + (shots - result.success_counts[i]) == shots);
    }
}

} // TEST_SUITE
