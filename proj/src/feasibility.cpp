#include "pqclone/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pqclone {

ParameterPoint ParameterPoint::create(Eigen::VectorXd q) {
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        if (!(q(i) >= 0.0 && q(i) <= 1.0)) {
            fail("InvariantViolation",
                 "q component " + std::to_string(i) + " outside [0,1]");
        }
    }
    ParameterPoint point;
    point.p = Eigen::VectorXd::Ones(q.size()) - q;
    point.q = std::move(q);
    return point;
}

ParameterPoint ParameterPoint::ones(int n) {
    return create(Eigen::VectorXd::Ones(n));
}

ParameterPoint ParameterPoint::zeros(int n) {
    return create(Eigen::VectorXd::Zero(n));
}

namespace detail {

SurfaceForm surface_form(const CloningProblem& problem) {
    return {problem.grams().x_m, problem.grams().x_n_p};
}

HermitianMatrix build_m_general(const SurfaceForm& form, const Eigen::VectorXd& q) {
    const int n = static_cast<int>(q.size());
    Eigen::VectorXd sp(n);
    for (int i = 0; i < n; ++i) {
        sp(i) = std::sqrt(std::max(0.0, 1.0 - q(i)));
    }
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        // written so that unit diagonals give exactly q_i
        const double aii = form.a(i, i).real();
        const double bii = form.b(i, i).real();
        m(i, i) = (aii - bii) + q(i) * bii;
        for (int j = i + 1; j < n; ++j) {
            const std::complex<double> v = form.a(i, j) - sp(i) * sp(j) * form.b(i, j);
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return HermitianMatrix(m);
}

bool feasible(const SurfaceForm& form, const Eigen::VectorXd& q, double tol) {
    return is_psd(build_m_general(form, q), tol);
}

double det_m(const SurfaceForm& form, const Eigen::VectorXd& q) {
    return determinant(build_m_general(form, q));
}

RayHit boundary_ray(const SurfaceForm& form, const Eigen::VectorXd& direction,
                    double tol, int bisect_iters) {
    const int n = static_cast<int>(direction.size());
    for (int i = 0; i < n; ++i) {
        if (!(direction(i) > 0.0)) {
            fail("InvariantViolation", "ray direction components must be positive");
        }
    }

    const Eigen::VectorXd anchor = Eigen::VectorXd::Ones(n);
    const auto point_at = [&](double t) {
        Eigen::VectorXd q = anchor - t * direction;
        for (int i = 0; i < n; ++i) q(i) = std::clamp(q(i), 0.0, 1.0);
        return q;
    };

    double t_cube = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) t_cube = std::min(t_cube, 1.0 / direction(i));

    if (feasible(form, point_at(t_cube), tol)) {
        Eigen::VectorXd q = point_at(t_cube);
        // pin the exiting coordinate to exactly zero
        for (int i = 0; i < n; ++i) {
            if (std::abs(1.0 - t_cube * direction(i)) < 1e-12) q(i) = 0.0;
        }
        return {t_cube, q, true};
    }

    // bracket by doubling, then bisect; feasibility along the ray is monotone
    // (the feasible stretch is an interval anchored at t = 0)
    double lo = 0.0;
    double hi = t_cube / 1024.0;
    while (feasible(form, point_at(hi), tol)) {
        lo = hi;
        hi = std::min(2.0 * hi, t_cube);
    }
    for (int it = 0; it < bisect_iters; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(form, point_at(mid), tol)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, point_at(lo), false};
}

} // namespace detail

HermitianMatrix build_m(const GramPair& grams, const ParameterPoint& q) {
    return detail::build_m_general({grams.x_m, grams.x_n_p}, q.q);
}

FeasibilityReport check(const CloningProblem& problem, const ParameterPoint& q,
                        double tol) {
    if (q.size() != problem.count()) {
        fail("InvariantViolation", "q size does not match state count");
    }
    FeasibilityReport report{build_m(problem.grams(), q), false, 0.0, 0.0, false};
    report.min_eig = min_eigenvalue(report.matrix);
    const double norm = spectral_norm(report.matrix);
    report.feasible = report.min_eig >= -tol * std::max(1.0, norm);
    report.det = determinant(report.matrix);
    report.on_surface = std::abs(report.det) <= 1e-9 * problem.surface_scale();
    return report;
}

FailGram recover_fail_gram(const CloningProblem& problem, const ParameterPoint& q,
                           double tol) {
    const int n = problem.count();
    const GramPair& grams = problem.grams();
    FailGram result;
    for (int i = 0; i < n; ++i) {
        if (q.q(i) > 0.0) result.active.push_back(i);
    }

    Eigen::VectorXd sp(n), sq(n);
    for (int i = 0; i < n; ++i) {
        sp(i) = std::sqrt(q.p(i));
        sq(i) = std::sqrt(q.q(i));
    }

    const int na = static_cast<int>(result.active.size());
    result.entries = Eigen::MatrixXcd(na, na);
    for (int a = 0; a < na; ++a) {
        const int i = result.active[a];
        result.entries(a, a) = 1.0; // (x_m_ii - p_i) / q_i with unit diagonals
        for (int b = a + 1; b < na; ++b) {
            const int j = result.active[b];
            const std::complex<double> num =
                grams.x_m(i, j) - sp(i) * sp(j) * grams.x_n_p(i, j);
            const std::complex<double> y = num / (sq(i) * sq(j));
            result.entries(a, b) = y;
            result.entries(b, a) = std::conj(y);
        }
    }

    // rows without a failure branch must already satisfy the identity exactly
    result.off_block_deviation = 0.0;
    for (int i = 0; i < n; ++i) {
        if (q.q(i) > 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dev =
                std::abs(grams.x_m(i, j) - sp(i) * sp(j) * grams.x_n_p(i, j));
            result.off_block_deviation = std::max(result.off_block_deviation, dev);
        }
    }

    const double scale = std::max(1.0, problem.x_m_norm());
    bool valid = result.off_block_deviation <= tol * scale;
    if (na > 0 && valid) {
        valid = is_psd(HermitianMatrix(result.entries), tol);
    }
    result.valid = valid;
    return result;
}

ParameterPoint boundary_along_ray(const CloningProblem& problem,
                                  const Eigen::VectorXd& direction, double tol) {
    if (direction.size() != problem.count()) {
        fail("InvariantViolation", "direction size does not match state count");
    }
    const auto hit = detail::boundary_ray(detail::surface_form(problem),
                                          direction.normalized(), tol);
    return ParameterPoint::create(hit.q);
}

bool segment_feasible(const CloningProblem& problem, const ParameterPoint& q_from,
                      int samples, double tol) {
    if (samples < 1) fail("InvariantViolation", "samples must be >= 1");
    const detail::SurfaceForm form = detail::surface_form(problem);
    const Eigen::VectorXd anchor = Eigen::VectorXd::Ones(q_from.size());
    for (int k = 0; k < samples; ++k) {
        const double u = samples == 1 ? 0.0 : double(k) / double(samples - 1);
        const Eigen::VectorXd q = q_from.q + u * (anchor - q_from.q);
        if (!detail::feasible(form, q, tol)) return false;
    }
    return true;
}

} // namespace pqclone
