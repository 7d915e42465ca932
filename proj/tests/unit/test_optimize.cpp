#include <doctest.h>

#include <cmath>

#include "pqclone/optimize.hpp"
#include "pqclone/oracle.hpp"
#include "test_support.hpp"

using namespace pqclone;
using testsup::Rng;

namespace {

CloningProblem symmetric_fixture() {
    return load_problem(testsup::fixture_path("three_symmetric.json"));
}

CloningProblem aligned_two_state(double s, double alpha_mag, int m, int n,
                                 const Eigen::Vector2d& priors) {
    // real nonnegative overlap, so an alpha of magnitude alpha_mag is already
    // phase-aligned with s^m / s^n
    Eigen::MatrixXcd alpha(2, 2);
    alpha << 1.0, alpha_mag, alpha_mag, 1.0;
    return CloningProblem::create(testsup::two_states_with_overlap(s), m, n,
                                  AlphaGram::create(alpha), priors);
}

} // namespace

TEST_SUITE("optimize") {

TEST_CASE("symmetric fixture: interior tangency at the cubic root") {
    const Optimum opt = optimize(symmetric_fixture());
    const double expected = testsup::symmetric_fixture_q();
    CHECK(opt.Q == doctest::Approx(expected).epsilon(1e-8));
    CHECK(opt.success == doctest::Approx(1.0 - expected).epsilon(1e-8));
    CHECK(std::abs(opt.q_star.q(0) - opt.q_star.q(1)) <= 1e-9);
    CHECK(std::abs(opt.q_star.q(1) - opt.q_star.q(2)) <= 1e-9);
    CHECK(opt.certificate == Certificate::SurfaceTangent);
    CHECK(std::abs(opt.det_at_opt) <= 1e-8);
    CHECK(opt.gradient_residual <= 1e-6);
    CHECK(opt.converged);
}

TEST_CASE("skewed priors stay close to the grid oracle") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("three_symmetric_skewed.json"));
    const Optimum opt = optimize(problem);
    const Optimum grid = grid_optimum(problem, GridSpec::create(0.005));
    CHECK(opt.Q <= grid.Q + 1e-9);
    CHECK(std::abs(opt.Q - grid.Q) <= 3.0 * 0.005);
    CHECK(check(problem, opt.q_star).feasible);
}

TEST_CASE("orthonormal states cost nothing") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("orthonormal.json"));
    const Optimum opt = optimize(problem);
    CHECK(opt.Q == 0.0);
    CHECK(opt.q_star.q.maxCoeff() == 0.0);
    CHECK(opt.certificate == Certificate::CubeFace);
    CHECK(opt.converged);
}

TEST_CASE("two-state identification closed form") {
    for (double s : {0.1, 0.4, 1.0 / std::sqrt(2.0), 0.9}) {
        const Optimum opt =
            optimize_two(testsup::two_states_with_overlap(s), 1, 2, 0.0,
                         Eigen::Vector2d(0.5, 0.5));
        CHECK(opt.q_star.q(0) == doctest::Approx(s).epsilon(1e-9));
        CHECK(opt.q_star.q(1) == doctest::Approx(s).epsilon(1e-9));
        CHECK(opt.Q == doctest::Approx(s).epsilon(1e-9));
    }
}

TEST_CASE("two-state cloning closed form p = 1/(1+s)") {
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const Optimum opt =
            optimize_two(testsup::two_states_with_overlap(s), 1, 2, 1.0,
                         Eigen::Vector2d(0.5, 0.5));
        const double expected_p = 1.0 / (1.0 + s);
        CHECK(opt.q_star.p(0) == doctest::Approx(expected_p).epsilon(1e-8));
        CHECK(opt.q_star.p(1) == doctest::Approx(expected_p).epsilon(1e-8));
    }
}

TEST_CASE("two-state solver handles orthogonal inputs") {
    const Optimum opt = optimize_two(testsup::two_states_with_overlap(0.0), 1, 2,
                                     1.0, Eigen::Vector2d(0.5, 0.5));
    CHECK(opt.Q == 0.0);
    CHECK(opt.q_star.q(0) == 0.0);
    CHECK(opt.q_star.q(1) == 0.0);
}

TEST_CASE("two-state curve residual is tiny at the solution") {
    Rng rng(2718);
    for (int trial = 0; trial < 40; ++trial) {
        const double s = rng.uniform(0.05, 0.95);
        const double alpha_mag = trial % 3 == 0 ? 1.0 : rng.uniform(0.0, 1.0);
        const int m = 1 + int(rng.uniform() * 2);
        const int n = m + 1 + int(rng.uniform() * 2);
        Eigen::Vector2d priors(rng.uniform(0.1, 0.9), 0.0);
        priors(1) = 1.0 - priors(0);
        const Optimum opt = optimize_two(testsup::two_states_with_overlap(s), m, n,
                                         alpha_mag, priors);
        const double q1 = opt.q_star.q(0), q2 = opt.q_star.q(1);
        const double residual = std::pow(s, m) -
                                std::sqrt((1.0 - q1) * (1.0 - q2)) * alpha_mag *
                                    std::pow(s, n) -
                                std::sqrt(q1 * q2);
        CHECK(std::abs(residual) <= 1e-10);
    }
}

TEST_CASE("general optimizer agrees with the two-state solver") {
    Rng rng(314159);
    for (int trial = 0; trial < 12; ++trial) {
        const double s = rng.uniform(0.1, 0.9);
        const double alpha_mag = trial % 2 == 0 ? 1.0 : rng.uniform(0.3, 1.0);
        Eigen::Vector2d priors(rng.uniform(0.15, 0.85), 0.0);
        priors(1) = 1.0 - priors(0);
        const CloningProblem problem = aligned_two_state(s, alpha_mag, 1, 2, priors);
        const Optimum direct = optimize_two(problem);
        const Optimum general = optimize(problem);
        CHECK(std::abs(direct.Q - general.Q) <= 1e-8);
        CHECK(check(problem, general.q_star).feasible);
    }
}

TEST_CASE("very skewed two-state priors pin a coordinate at one") {
    const Optimum opt = optimize_two(testsup::two_states_with_overlap(0.9), 1, 2,
                                     0.0, Eigen::Vector2d(0.9, 0.1));
    CHECK(opt.q_star.q(1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(opt.q_star.q(0) == doctest::Approx(0.81).epsilon(1e-9));
    CHECK(opt.certificate == Certificate::CubeFace);

    const Optimum general =
        optimize(aligned_two_state(0.9, 0.0, 1, 2, Eigen::Vector2d(0.9, 0.1)));
    CHECK(std::abs(general.Q - opt.Q) <= 1e-8);
}

TEST_CASE("identification fast path") {
    const CloningProblem problem = symmetric_fixture();
    const Optimum opt = identify(problem.states(), problem.priors(), 1);
    CHECK(opt.success ==
          doctest::Approx(1.0 - testsup::symmetric_fixture_q()).epsilon(1e-8));

    const StateSet two = testsup::two_states_with_overlap(0.35);
    const Optimum opt2 = identify(two, Eigen::Vector2d(0.5, 0.5), 1);
    CHECK(opt2.Q == doctest::Approx(0.35).epsilon(1e-7));

    const CloningProblem orth =
        load_problem(testsup::fixture_path("orthonormal.json"));
    const Optimum opt3 = identify(orth.states(), orth.priors(), 1);
    CHECK(opt3.Q == 0.0);
}

TEST_CASE("surface mesh density and surface membership") {
    const CloningProblem problem = symmetric_fixture();
    const int resolution = 12;
    const auto mesh = surface_mesh(problem, resolution);
    REQUIRE(mesh.size() == std::size_t(resolution) * resolution);
    const Eigen::MatrixXcd s = compute_overlaps(problem.states());
    for (const auto& point : mesh) {
        const double det = testsup::det3_identification(point.q, s(0, 1), s(0, 2),
                                                        s(1, 2));
        double edge = 1.0;
        for (int i = 0; i < 3; ++i) edge = std::min({edge, point.q(i), 1.0 - point.q(i)});
        CHECK((std::abs(det) <= 1e-8 || edge <= 1e-9));
        // the fixture's surface obeys q1 q2 q3 - (q1+q2+q3)/3 + 1/3 = 0
        const double reduced = point.q(0) * point.q(1) * point.q(2) -
                               (point.q(0) + point.q(1) + point.q(2)) / 3.0 +
                               1.0 / 3.0;
        CHECK((std::abs(reduced) <= 1e-8 || edge <= 1e-9));
    }
}

TEST_CASE("orthonormal surface mesh collapses to the cube faces") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("orthonormal.json"));
    const auto mesh = surface_mesh(problem, 6);
    for (const auto& point : mesh) {
        CHECK(point.q.minCoeff() == 0.0);
    }
}

TEST_CASE("mesh rejects other dimensions") {
    Rng rng(11);
    const CloningProblem two = testsup::random_problem(rng, 2, 2, 1, 2);
    CHECK_THROWS_WITH_AS(surface_mesh(two, 8),
                         doctest::Contains("UnsupportedDimension"), Error);
}

TEST_CASE("optima are feasible and locally optimal on random problems") {
    Rng rng(97531);
    for (int trial = 0; trial < 8; ++trial) {
        const CloningProblem problem = testsup::random_problem(rng, 3, 3, 1, 2);
        const Optimum opt = optimize(problem);
        const FeasibilityReport report = check(problem, opt.q_star);
        CHECK(report.feasible);

        // axis probes: no feasible neighbor improves Q beyond slack
        for (int i = 0; i < 3; ++i) {
            for (double sign : {-1.0, 1.0}) {
                Eigen::VectorXd q = opt.q_star.q;
                q(i) += sign * 1e-4;
                if (q(i) < 0.0 || q(i) > 1.0) continue;
                const ParameterPoint probe = ParameterPoint::create(q);
                if (!check(problem, probe).feasible) continue;
                CHECK(problem.priors().dot(q) >= opt.Q - 1e-10);
            }
        }
    }
}

TEST_CASE("objective scaling leaves the argmin unchanged") {
    const CloningProblem problem = symmetric_fixture();
    const detail::SurfaceForm form = detail::surface_form(problem);
    OptimizeOptions options;
    const Optimum a = detail::optimize_surface(form, Eigen::Vector3d(0.35, 0.25, 0.4),
                                               options, problem.surface_scale());
    const Optimum b = detail::optimize_surface(form, Eigen::Vector3d(1.75, 1.25, 2.0),
                                               options, problem.surface_scale());
    CHECK((a.q_star.q - b.q_star.q).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("multi-copy identification squares the overlap cost") {
    // alpha = identity with m = 2 turns the constraint into q1 q2 >= |s|^4
    const StateSet states = testsup::two_states_with_overlap(0.6);
    const Optimum opt = identify(states, Eigen::Vector2d(0.5, 0.5), 2);
    CHECK(opt.Q == doctest::Approx(0.36).epsilon(1e-8));

    const Optimum direct = optimize_two(states, 2, 3, 0.0, Eigen::Vector2d(0.5, 0.5));
    CHECK(std::abs(direct.Q - opt.Q) <= 1e-8);
}

TEST_CASE("cloning geometry with partly orthogonal states tracks the grid") {
    const CloningProblem problem =
        load_problem(testsup::fixture_path("orthogonal_pair.json"));
    const Optimum opt = optimize(problem);
    const Optimum grid = grid_optimum(problem, GridSpec::create(0.005));
    CHECK(opt.Q <= grid.Q + 1e-9);
    CHECK(std::abs(opt.Q - grid.Q) <= 3.0 * 0.005);
    CHECK(check(problem, opt.q_star).feasible);
}

TEST_CASE("n = 2 identification via the general path hits q = |s|") {
    const CloningProblem problem = CloningProblem::create(
        testsup::two_states_with_overlap(0.6), 1, 2, AlphaGram::identity(2),
        Eigen::Vector2d(0.5, 0.5));
    const Optimum opt = optimize(problem);
    CHECK(opt.Q == doctest::Approx(0.6).epsilon(1e-8));
    CHECK(opt.certificate == Certificate::SurfaceTangent);
}

} // TEST_SUITE
