#include "pqclone/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "pqclone/kernels/feasibility_kernels.hpp"

namespace pqclone {

namespace {

constexpr long kMaxGridPoints = 300'000'000L;

using kernels::CompiledFeasibility;
using kernels::PointClass;

bool exact_feasible(const detail::SurfaceForm& form, const Eigen::VectorXd& q,
                    double tol) {
    return detail::feasible(form, q, tol);
}

// worst-case gradient magnitude of det over a coarse lattice, for the
// resolution-aware near-surface band
double grad_det_estimate(const detail::SurfaceForm& form, int n) {
    const int samples = 5;
    const double h = 1e-5;
    std::vector<int> idx(n, 0);
    double worst = 0.0;
    while (true) {
        Eigen::VectorXd q(n);
        for (int i = 0; i < n; ++i) q(i) = (idx[i] + 0.5) / double(samples);
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd qa = q, qb = q;
            qa(i) += h;
            qb(i) -= h;
            const double g = (detail::det_m(form, qa) - detail::det_m(form, qb)) /
                             (2.0 * h);
            norm2 += g * g;
        }
        worst = std::max(worst, std::sqrt(norm2));
        int axis = 0;
        while (axis < n && ++idx[axis] == samples) idx[axis++] = 0;
        if (axis == n) break;
    }
    return worst;
}

} // namespace

GridSpec GridSpec::create(double step) {
    if (!(step > 0.0 && step <= 0.1)) {
        fail("InvariantViolation", "grid step must lie in (0, 0.1]");
    }
    return {step};
}

std::vector<double> GridSpec::axis() const {
    std::vector<double> values;
    const long count = std::lround(std::floor(1.0 / step + 1e-9));
    values.reserve(count + 1);
    for (long k = 0; k < count; ++k) values.push_back(double(k) * step);
    values.push_back(1.0);
    if (values.size() >= 2 && values[values.size() - 2] >= 1.0 - 1e-12) {
        values.erase(values.end() - 2);
    }
    return values;
}

Optimum grid_optimum(const CloningProblem& problem, const GridSpec& grid, double tol) {
    const int n = problem.count();
    if (n > 4) {
        fail("GridTooLarge", "grid optimum supports N <= 4");
    }
    const std::vector<double> axis = grid.axis();
    const long a = static_cast<long>(axis.size());
    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= double(a);
    if (total > double(kMaxGridPoints)) {
        fail("GridTooLarge", "grid has too many points");
    }

    const detail::SurfaceForm form = detail::surface_form(problem);
    const CompiledFeasibility cf =
        CompiledFeasibility::pack(problem.grams().x_m, problem.grams().x_n_p);
    const Eigen::VectorXd& w = problem.priors();

    std::vector<PointClass> cls(a);
    std::vector<double> dets(a);
    std::vector<std::vector<double>> coords(n, std::vector<double>(a));
    const double* q_ptrs[4] = {};
    for (int i = 0; i < n; ++i) q_ptrs[i] = coords[i].data();

    bool have_best = false;
    Eigen::VectorXd best_q(n);
    double best_score = std::numeric_limits<double>::infinity();

    const auto consider = [&](const Eigen::VectorXd& q, double score) {
        if (!have_best || score < best_score - 1e-12) {
            have_best = true;
            best_q = q;
            best_score = score;
            return;
        }
        if (score > best_score + 1e-12) return;
        for (int i = 0; i < n; ++i) {
            if (q(i) < best_q(i) - 1e-12) {
                best_q = q;
                best_score = score;
                return;
            }
            if (q(i) > best_q(i) + 1e-12) return;
        }
    };

    // rows vary the first coordinate; priors are positive, so within a row the
    // first feasible point minimizes the row's objective
    std::vector<long> outer(std::max(0, n - 1), 0);
    Eigen::VectorXd q(n);
    while (true) {
        double rest = 0.0;
        for (int i = 1; i < n; ++i) {
            q(i) = axis[outer[i - 1]];
            rest += w(i) * q(i);
        }
        for (long k = 0; k < a; ++k) {
            coords[0][k] = axis[k];
            for (int i = 1; i < n; ++i) coords[i][k] = q(i);
        }
        kernels::classify_batch(cf, q_ptrs, a, cls.data(), dets.data());

        for (long k = 0; k < a; ++k) {
            const double score = w(0) * axis[k] + rest;
            if (have_best && score >= best_score + 1e-12) break;
            bool ok;
            if (cls[k] == PointClass::Feasible) {
                ok = true;
            } else if (cls[k] == PointClass::Infeasible) {
                ok = false;
            } else {
                q(0) = axis[k];
                ok = exact_feasible(form, q, tol);
            }
            if (ok) {
                q(0) = axis[k];
                consider(q, score);
                break; // row minimum found
            }
        }

        int axis_idx = 0;
        while (axis_idx < n - 1 && ++outer[axis_idx] == a) outer[axis_idx++] = 0;
        if (axis_idx == n - 1) break;
    }

    Optimum opt;
    opt.q_star = ParameterPoint::create(best_q);
    opt.Q = best_score;
    opt.success = 1.0 - best_score;
    opt.det_at_opt = detail::det_m(form, best_q);
    opt.gradient_residual = std::numeric_limits<double>::quiet_NaN();
    opt.certificate = Certificate::Degenerate;
    opt.converged = true;
    return opt;
}

CensusResult region_census(const CloningProblem& problem, const GridSpec& grid,
                           double tol) {
    const int n = problem.count();
    if (n > 3) {
        fail("GridTooLarge", "region census supports N <= 3");
    }
    const std::vector<double> axis = grid.axis();
    const long a = static_cast<long>(axis.size());
    long total = 1;
    for (int i = 0; i < n; ++i) {
        if (total > kMaxGridPoints / a) fail("GridTooLarge", "grid has too many points");
        total *= a;
    }

    const detail::SurfaceForm form = detail::surface_form(problem);
    const CompiledFeasibility cf =
        CompiledFeasibility::pack(problem.grams().x_m, problem.grams().x_n_p);

    CensusResult census;
    census.near_band = 10.0 * grid.step * grad_det_estimate(form, n);

    std::vector<uint8_t> feasible_map(total, 0);
    std::vector<PointClass> cls(a);
    std::vector<double> dets(a);
    std::vector<std::vector<double>> coords(n, std::vector<double>(a));
    const double* q_ptrs[3] = {};
    for (int i = 0; i < n; ++i) q_ptrs[i] = coords[i].data();

    std::vector<long> outer(std::max(0, n - 1), 0);
    Eigen::VectorXd q(n);
    while (true) {
        long base = 0;
        long mult = a;
        for (int i = 1; i < n; ++i) {
            q(i) = axis[outer[i - 1]];
            base += outer[i - 1] * mult;
            mult *= a;
        }
        for (long k = 0; k < a; ++k) {
            coords[0][k] = axis[k];
            for (int i = 1; i < n; ++i) coords[i][k] = q(i);
        }
        kernels::classify_batch(cf, q_ptrs, a, cls.data(), dets.data());

        for (long k = 0; k < a; ++k) {
            bool ok;
            if (cls[k] == PointClass::Feasible) {
                ok = true;
            } else if (cls[k] == PointClass::Infeasible) {
                ok = false;
            } else {
                q(0) = axis[k];
                ok = exact_feasible(form, q, tol);
            }
            feasible_map[base + k] = ok ? 1 : 0;
            if (ok) {
                ++census.feasible;
            } else {
                ++census.infeasible;
            }
            if (std::abs(dets[k]) <= census.near_band) ++census.near_surface;
        }

        int axis_idx = 0;
        while (axis_idx < n - 1 && ++outer[axis_idx] == a) outer[axis_idx++] = 0;
        if (axis_idx == n - 1) break;
    }

    // flood fill over the 2N-neighbor grid graph from the all-ones corner
    std::vector<long> strides(n);
    strides[0] = 1;
    for (int i = 1; i < n; ++i) strides[i] = strides[i - 1] * a;
    long start = 0;
    for (int i = 0; i < n; ++i) start += (a - 1) * strides[i];

    census.component_size = 0;
    bool all_reached = true;
    if (feasible_map[start]) {
        std::vector<uint8_t> visited(total, 0);
        std::vector<long> frontier{start};
        visited[start] = 1;
        census.component_size = 1;
        std::vector<long> next;
        while (!frontier.empty()) {
            next.clear();
            for (long node : frontier) {
                long rem = node;
                for (int i = n - 1; i >= 0; --i) {
                    const long coord = rem / strides[i];
                    rem -= coord * strides[i];
                    if (coord > 0) {
                        const long nb = node - strides[i];
                        if (!visited[nb] && feasible_map[nb]) {
                            visited[nb] = 1;
                            ++census.component_size;
                            next.push_back(nb);
                        }
                    }
                    if (coord < a - 1) {
                        const long nb = node + strides[i];
                        if (!visited[nb] && feasible_map[nb]) {
                            visited[nb] = 1;
                            ++census.component_size;
                            next.push_back(nb);
                        }
                    }
                }
            }
            frontier.swap(next);
        }
        all_reached = census.component_size == census.feasible;
    } else {
        all_reached = false;
    }
    census.single_component = all_reached;
    return census;
}

} // namespace pqclone
