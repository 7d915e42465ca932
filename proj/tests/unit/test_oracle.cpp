#include <doctest.h>

#include <cmath>

#include "pqclone/oracle.hpp"
#include "test_support.hpp"

using namespace pqclone;
using testsup::Rng;

TEST_SUITE("oracle") {

TEST_CASE("grid spec validates and includes both endpoints") {
    CHECK_THROWS_AS(GridSpec::create(0.0), Error);
    CHECK_THROWS_AS(GridSpec::create(0.2), Error);
    const auto axis = GridSpec::create(0.005).axis();
    CHECK(axis.size() == 201);
    CHECK(axis.front() == 0.0);
    CHECK(axis.back() == 1.0);
}

TEST_CASE("symmetric fixture optimum from the grid") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("three_symmetric.json"));
    const Optimum opt = grid_optimum(problem, GridSpec::create(0.005));
    const double expected = testsup::symmetric_fixture_q();
    CHECK(opt.Q >= expected - 1e-9); // grid points are feasible, so Q is an upper bound
    CHECK(opt.Q == doctest::Approx(expected).epsilon(0.02));
    CHECK(std::abs(opt.Q - expected) <= 3.0 * 0.005);

    const Optimum fine = grid_optimum(problem, GridSpec::create(0.002));
    CHECK(std::abs(fine.Q - expected) <= 4e-3);
}

TEST_CASE("two-state identification grid matches the closed form") {
    const double s = 1.0 / std::sqrt(2.0);
    const CloningProblem problem = CloningProblem::create(
        testsup::two_states_with_overlap(s), 1, 2, AlphaGram::identity(2),
        Eigen::Vector2d(0.5, 0.5));
    const Optimum opt = grid_optimum(problem, GridSpec::create(0.001));
    CHECK(std::abs(opt.Q - s) <= 2e-3);
    CHECK(opt.Q >= s - 1e-12);
}

TEST_CASE("orthonormal states are free everywhere") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("orthonormal.json"));
    const Optimum opt = grid_optimum(problem, GridSpec::create(0.05));
    CHECK(opt.Q == 0.0);
    CHECK(opt.q_star.q.maxCoeff() == 0.0);

    const CensusResult census = region_census(problem, GridSpec::create(0.05));
    CHECK(census.infeasible == 0);
    CHECK(census.single_component);
    CHECK(census.component_size == census.feasible);
}

TEST_CASE("census of the symmetric fixture finds one component") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("three_symmetric.json"));
    const CensusResult census = region_census(problem, GridSpec::create(0.02));
    CHECK(census.single_component);
    CHECK(census.feasible > 0);
    CHECK(census.infeasible > 0);
    CHECK(census.near_surface > 0);
}

TEST_CASE("the second determinant root sits in the infeasible region") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("three_symmetric.json"));
    const double t = testsup::depressed_cubic_roots(-1.0, 1.0 / 3.0)[1];
    // nearby grid points classify infeasible although det is nearly zero there
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd q(3);
        for (int i = 0; i < 3; ++i) q(i) = t + rng.uniform(-0.004, 0.004);
        CHECK_FALSE(check(problem, ParameterPoint::create(q)).feasible);
    }
}

TEST_CASE("grid guards") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("three_symmetric.json"));
    CHECK_THROWS_WITH_AS(grid_optimum(problem, GridSpec::create(1e-4)),
                         doctest::Contains("GridTooLarge"), Error);
    Rng rng(6);
    const CloningProblem big = testsup::random_problem(rng, 4, 4, 1, 2);
    CHECK_THROWS_WITH_AS(region_census(big, GridSpec::create(0.05)),
                         doctest::Contains("GridTooLarge"), Error);
}

TEST_CASE("four-state grids run on the scalar kernel path") {
    Rng rng(7);
    const CloningProblem problem = testsup::random_problem(rng, 4, 4, 1, 2);
    const Optimum opt = grid_optimum(problem, GridSpec::create(0.1));
    CHECK(check(problem, opt.q_star).feasible);
    CHECK(opt.Q <= 1.0);
    CHECK(opt.Q >= 0.0);
}

} // TEST_SUITE
