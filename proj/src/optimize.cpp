#include "pqclone/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace pqclone {

const char* certificate_name(Certificate c) {
    switch (c) {
        case Certificate::SurfaceTangent: return "SurfaceTangent";
        case Certificate::CubeFace: return "CubeFace";
        case Certificate::Degenerate: return "Degenerate";
    }
    return "Degenerate";
}

namespace {

using detail::SurfaceForm;

constexpr double kTieTol = 1e-12;
constexpr double kBoundTol = 1e-9;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

int default_multistart(int n) {
    return std::max(64, 8 * (1 << n));
}

double halton(uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * double(index % base);
        index /= base;
    }
    return r;
}

Eigen::VectorXd clamp01(Eigen::VectorXd q) {
    for (Eigen::Index i = 0; i < q.size(); ++i) q(i) = std::clamp(q(i), 0.0, 1.0);
    return q;
}

// asymmetric central differences; the stencil shrinks at the cube bounds
// where sqrt(1-q) is only defined on one side
double fd_partial_det(const SurfaceForm& form, const Eigen::VectorXd& q, int i,
                      double h) {
    const double up = std::min(h, 1.0 - q(i));
    const double dn = std::min(h, q(i));
    Eigen::VectorXd qa = q, qb = q;
    qa(i) += up;
    qb(i) -= dn;
    return (detail::det_m(form, qa) - detail::det_m(form, qb)) / (up + dn);
}

// Jacobi's formula: d det = tr(adj(M) dM). The adjugate comes from the
// eigendecomposition, which stays well defined on the det = 0 surface where
// the tangency system lives; coordinates at the q = 1 face (sqrt(1-q) -> 0)
// fall back to the difference stencil.
Eigen::VectorXd grad_det(const SurfaceForm& form, const Eigen::VectorXd& q, double h) {
    const int n = static_cast<int>(q.size());
    const HermitianMatrix m = detail::build_m_general(form, q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.entries());
    const Eigen::VectorXd ev = solver.eigenvalues();
    Eigen::VectorXd cof(n);
    for (int i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j != i) prod *= ev(j);
        }
        cof(i) = prod;
    }
    const Eigen::MatrixXcd adj = solver.eigenvectors() * cof.asDiagonal() *
                                 solver.eigenvectors().adjoint();

    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
        const double sp_i = std::sqrt(std::max(0.0, 1.0 - q(i)));
        if (sp_i < 1e-7) {
            g(i) = fd_partial_det(form, q, i, h);
            continue;
        }
        // dM/dq_i is zero away from row/column i:
        //   dM_il = B_il sp_l / (2 sp_i),  dM_ii = B_ii
        std::complex<double> acc(0.0, 0.0);
        for (int l = 0; l < n; ++l) {
            if (l == i) continue;
            const double sp_l = std::sqrt(std::max(0.0, 1.0 - q(l)));
            const std::complex<double> dm_il = form.b(i, l) * (sp_l / (2.0 * sp_i));
            // tr(adj dM) picks up (i,l) and (l,i); both contribute conjugates
            acc += adj(l, i) * dm_il + adj(i, l) * std::conj(dm_il);
        }
        acc += adj(i, i) * form.b(i, i).real();
        g(i) = acc.real();
    }
    return g;
}

Eigen::MatrixXd hess_det(const SurfaceForm& form, const Eigen::VectorXd& q,
                         double grad_h) {
    const int n = static_cast<int>(q.size());
    const double h = 1e-4;
    Eigen::MatrixXd hess(n, n);
    for (int i = 0; i < n; ++i) {
        const double up = std::min(h, 1.0 - q(i));
        const double dn = std::min(h, q(i));
        Eigen::VectorXd qa = q, qb = q;
        qa(i) += up;
        qb(i) -= dn;
        hess.col(i) = (grad_det(form, qa, grad_h) - grad_det(form, qb, grad_h)) /
                      (up + dn);
    }
    return 0.5 * (hess + hess.transpose());
}

// Ray hits sit on the tolerance-shifted boundary (min eigenvalue at
// -tol * scale), so their objective can undercut the exact tangency point by
// a few 1e-10. Within that slack a polished point outranks a raw ray point;
// exact ties fall back to the lexicographically smallest q.
constexpr double kScoreSlack = 1e-8;

struct Candidate {
    Eigen::VectorXd q;
    double score = std::numeric_limits<double>::infinity();
    int priority = 0; // 0 = ray hit, 1 = simplex-refined, 2 = polished/exact
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.score < b.score - kScoreSlack) return true;
    if (a.score > b.score + kScoreSlack) return false;
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.score < b.score - kTieTol) return true;
    if (a.score > b.score + kTieTol) return false;
    for (Eigen::Index i = 0; i < a.q.size(); ++i) {
        if (a.q(i) < b.q(i) - kTieTol) return true;
        if (a.q(i) > b.q(i) + kTieTol) return false;
    }
    return false;
}

std::vector<Eigen::VectorXd> multistart_directions(int n, const Eigen::VectorXd& w,
                                                   int count) {
    static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                 23, 29, 31, 37, 41, 43, 47, 53};
    std::vector<Eigen::VectorXd> dirs;
    dirs.reserve(count + n + 2);
    dirs.push_back(Eigen::VectorXd::Ones(n).normalized());
    dirs.push_back(w.normalized());
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd d = Eigen::VectorXd::Constant(n, 0.15);
        d(i) += 1.0;
        dirs.push_back(d.normalized());
    }
    const int remaining = std::max(0, count - static_cast<int>(dirs.size()));
    for (int k = 0; k < remaining; ++k) {
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) {
            const double u = halton(uint64_t(k) + 17, primes[i % 16]);
            d(i) = std::sqrt(-std::log1p(-u)) + 1e-9;
        }
        dirs.push_back(d.normalized());
    }
    return dirs;
}

double ray_objective(const SurfaceForm& form, const Eigen::VectorXd& w,
                     const Eigen::VectorXd& v, const OptimizeOptions& opts,
                     Eigen::VectorXd* q_out) {
    const int n = static_cast<int>(v.size());
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = std::exp(std::clamp(v(i), -30.0, 30.0));
    d.normalize();
    const auto hit = detail::boundary_ray(form, d, opts.psd_tol, opts.bisect_iters);
    if (q_out) *q_out = hit.q;
    return w.dot(hit.q);
}

// Nelder-Mead on the log-direction parametrization
Candidate refine_direction(const SurfaceForm& form, const Eigen::VectorXd& w,
                           const Eigen::VectorXd& d0, const OptimizeOptions& opts) {
    const int n = static_cast<int>(d0.size());
    struct Vertex {
        Eigen::VectorXd v;
        Eigen::VectorXd q;
        double f;
    };
    const auto eval = [&](const Eigen::VectorXd& v) {
        Vertex vx;
        vx.v = v;
        vx.f = ray_objective(form, w, v, opts, &vx.q);
        return vx;
    };

    Eigen::VectorXd v0(n);
    for (int i = 0; i < n; ++i) v0(i) = std::log(std::max(d0(i), 1e-12));

    std::vector<Vertex> simplex;
    simplex.push_back(eval(v0));
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v = v0;
        v(i) += 0.1;
        simplex.push_back(eval(v));
    }
    const auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

    for (int iter = 0; iter < opts.refine_iters; ++iter) {
        std::sort(simplex.begin(), simplex.end(), by_f);
        if (simplex.back().f - simplex.front().f < 1e-13 &&
            (simplex.back().v - simplex.front().v).norm() < 1e-9) {
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += simplex[i].v;
        centroid /= double(n);

        const Vertex& worst = simplex.back();
        Vertex reflected = eval(centroid + (centroid - worst.v));
        if (reflected.f < simplex.front().f) {
            Vertex expanded = eval(centroid + 2.0 * (centroid - worst.v));
            simplex.back() = expanded.f < reflected.f ? expanded : reflected;
        } else if (reflected.f < simplex[n - 1].f) {
            simplex.back() = reflected;
        } else {
            Vertex contracted = eval(centroid + 0.5 * (worst.v - centroid));
            if (contracted.f < worst.f) {
                simplex.back() = contracted;
            } else {
                for (int i = 1; i <= n; ++i) {
                    simplex[i] = eval(simplex[0].v + 0.5 * (simplex[i].v - simplex[0].v));
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_f);
    return {simplex.front().q, simplex.front().f};
}

struct KktOut {
    Eigen::VectorXd q;
    bool converged = false;
};

// damped Newton on {grad det = lambda * w, det = 0}, iterates clamped to the cube
KktOut kkt_polish(const SurfaceForm& form, const Eigen::VectorXd& w,
                  const Eigen::VectorXd& q0, const OptimizeOptions& opts,
                  double det_scale) {
    const int n = static_cast<int>(q0.size());
    Eigen::VectorXd q = clamp01(q0);

    const auto residual = [&](const Eigen::VectorXd& qq, double lam,
                              Eigen::VectorXd* grad_out) {
        const Eigen::VectorXd g = grad_det(form, qq, opts.fd_step);
        if (grad_out) *grad_out = g;
        Eigen::VectorXd r(n + 1);
        r.head(n) = g - lam * w;
        r(n) = detail::det_m(form, qq) / det_scale;
        return r;
    };

    Eigen::VectorXd g = grad_det(form, q, opts.fd_step);
    double lambda = g.dot(w) / w.dot(w);
    Eigen::VectorXd r = residual(q, lambda, &g);

    KktOut out{q, false};
    for (int iter = 0; iter < 60; ++iter) {
        const double gn = std::max(g.norm(), 1e-300);
        const double tangency = (g - lambda * w).norm() / gn;
        if (std::abs(r(n)) <= 1e-12 && tangency <= 1e-9) {
            out.q = q;
            out.converged = true;
            return out;
        }

        Eigen::MatrixXd jac(n + 1, n + 1);
        jac.topLeftCorner(n, n) = hess_det(form, q, opts.fd_step);
        jac.topRightCorner(n, 1) = -w;
        jac.bottomLeftCorner(1, n) = g.transpose() / det_scale;
        jac(n, n) = 0.0;

        const Eigen::VectorXd step = jac.fullPivLu().solve(-r);
        if (!step.allFinite()) break;

        bool accepted = false;
        double alpha = 1.0;
        for (int k = 0; k < 12; ++k, alpha *= 0.5) {
            const Eigen::VectorXd q_try = clamp01(q + alpha * step.head(n));
            const double lam_try = lambda + alpha * step(n);
            const Eigen::VectorXd r_try = residual(q_try, lam_try, nullptr);
            if (r_try.norm() < r.norm()) {
                q = q_try;
                lambda = lam_try;
                r = residual(q, lambda, &g);
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    out.q = q;
    return out;
}

SurfaceForm schur_reduce(const SurfaceForm& form, const std::vector<int>& free_idx,
                         const std::vector<int>& pinned_idx) {
    const int nf = static_cast<int>(free_idx.size());
    const int np = static_cast<int>(pinned_idx.size());
    Eigen::MatrixXcd a_ff(nf, nf), a_fp(nf, np), a_pp(np, np), b_ff(nf, nf);
    for (int i = 0; i < nf; ++i) {
        for (int j = 0; j < nf; ++j) {
            a_ff(i, j) = form.a(free_idx[i], free_idx[j]);
            b_ff(i, j) = form.b(free_idx[i], free_idx[j]);
        }
        for (int j = 0; j < np; ++j) a_fp(i, j) = form.a(free_idx[i], pinned_idx[j]);
    }
    for (int i = 0; i < np; ++i) {
        for (int j = 0; j < np; ++j) a_pp(i, j) = form.a(pinned_idx[i], pinned_idx[j]);
    }
    // coordinates pinned at q = 1 drop out of the b term; their a-block folds
    // into the free block as a Schur complement
    SurfaceForm reduced;
    reduced.a = a_ff - a_fp * a_pp.ldlt().solve(a_fp.adjoint());
    reduced.b = b_ff;
    return reduced;
}

struct SearchOut {
    Eigen::VectorXd q;
    bool converged = false;
};

SearchOut search(const SurfaceForm& form, const Eigen::VectorXd& w,
                 const OptimizeOptions& opts, double det_scale, int depth) {
    const int n = static_cast<int>(w.size());

    if (n == 1) {
        const double a = form.a(0, 0).real();
        const double b = form.b(0, 0).real();
        double q = b > 0.0 ? std::clamp(1.0 - a / b, 0.0, 1.0) : 0.0;
        return {Eigen::VectorXd::Constant(1, q), true};
    }

    Candidate best;
    const auto offer = [&](const Eigen::VectorXd& q, int priority) {
        if (!detail::feasible(form, q, opts.psd_tol)) return;
        Candidate cand{q, w.dot(q), priority};
        if (better(cand, best)) best = cand;
    };

    const int count = opts.multistart > 0 ? opts.multistart : default_multistart(n);
    Candidate best_ray;
    for (const auto& d : multistart_directions(n, w, count)) {
        const auto hit = detail::boundary_ray(form, d, opts.psd_tol, opts.bisect_iters);
        Candidate cand{hit.q, w.dot(hit.q), 0};
        if (better(cand, best_ray)) best_ray = cand;
        offer(hit.q, 0);
    }

    bool converged = false;
    if (best_ray.q.size() == n) {
        const Eigen::VectorXd anchor_dir = (Eigen::VectorXd::Ones(n) - best_ray.q);
        Eigen::VectorXd polish_start = best_ray.q;
        if (anchor_dir.minCoeff() > 1e-12) {
            const Candidate refined =
                refine_direction(form, w, anchor_dir.normalized(), opts);
            offer(refined.q, 1);
            polish_start = refined.q;
        }
        const KktOut kkt = kkt_polish(form, w, polish_start, opts, det_scale);
        if (kkt.converged) offer(kkt.q, 2);
        converged = kkt.converged;
    }

    // cube faces: exhaustive for small n, pin-detected otherwise
    std::vector<int> face_axes;
    if (n <= 4) {
        for (int i = 0; i < n; ++i) face_axes.push_back(i);
    } else if (best.q.size() == n) {
        for (int i = 0; i < n; ++i) {
            if (best.q(i) >= 1.0 - 1e-4) face_axes.push_back(i);
        }
    }
    for (int axis : face_axes) {
        std::vector<int> free_idx, pinned_idx{axis};
        for (int i = 0; i < n; ++i) {
            if (i != axis) free_idx.push_back(i);
        }
        Eigen::VectorXd w_free(n - 1);
        for (int i = 0; i < n - 1; ++i) w_free(i) = w(free_idx[i]);
        const SurfaceForm reduced = schur_reduce(form, free_idx, pinned_idx);
        const SearchOut sub = search(reduced, w_free, opts, det_scale, depth + 1);
        Eigen::VectorXd q_full(n);
        q_full(axis) = 1.0;
        for (int i = 0; i < n - 1; ++i) q_full(free_idx[i]) = sub.q(i);
        offer(q_full, sub.converged ? 2 : 0);
    }

    SearchOut out;
    if (best.q.size() != n) {
        // anchor is always feasible, so this only happens on tolerance abuse
        out.q = Eigen::VectorXd::Ones(n);
        out.converged = false;
        return out;
    }
    out.q = best.q;
    out.converged = converged || n <= 1;
    return out;
}

bool locally_optimal(const SurfaceForm& form, const Eigen::VectorXd& w,
                     const Eigen::VectorXd& q, double tol) {
    const double q_score = w.dot(q);
    const int n = static_cast<int>(q.size());
    for (int i = 0; i < n; ++i) {
        for (double sign : {-1.0, 1.0}) {
            Eigen::VectorXd probe = q;
            probe(i) += sign * 1e-4;
            if (probe(i) < 0.0 || probe(i) > 1.0) continue;
            if (w.dot(probe) >= q_score - 1e-10) continue;
            if (detail::feasible(form, probe, tol)) return false;
        }
    }
    return true;
}

Eigen::VectorXd ensure_feasible(const SurfaceForm& form, Eigen::VectorXd q,
                                double tol) {
    const int n = static_cast<int>(q.size());
    double pull = 1e-12;
    for (int k = 0; k < 8 && !detail::feasible(form, q, tol); ++k, pull *= 10.0) {
        q = clamp01(q + pull * (Eigen::VectorXd::Ones(n) - q));
    }
    return q;
}

Optimum finish(const SurfaceForm& form, const Eigen::VectorXd& w,
               const OptimizeOptions& opts, double surface_scale,
               const SearchOut& out) {
    const int n = static_cast<int>(w.size());
    const Eigen::VectorXd q = ensure_feasible(form, out.q, opts.psd_tol);

    Optimum opt;
    opt.q_star = ParameterPoint::create(q);
    opt.Q = w.dot(q);
    opt.success = 1.0 - opt.Q;
    opt.det_at_opt = detail::det_m(form, q);
    opt.gradient_residual = kNaN;

    bool at_bound = false;
    for (int i = 0; i < n; ++i) {
        at_bound = at_bound || q(i) <= kBoundTol || q(i) >= 1.0 - kBoundTol;
    }

    const double surface_tol = 1e-9 * surface_scale;
    if (!at_bound) {
        const Eigen::VectorXd g = grad_det(form, q, opts.fd_step);
        const double gn = g.norm();
        if (gn > 1e-12) {
            const double lambda = g.dot(w) / w.dot(w);
            opt.gradient_residual = (g - lambda * w).norm() / gn;
        }
        if (std::abs(opt.det_at_opt) <= surface_tol &&
            opt.gradient_residual <= opts.kkt_residual_tol) {
            opt.certificate = Certificate::SurfaceTangent;
        } else {
            opt.certificate = Certificate::Degenerate;
        }
    } else {
        opt.certificate = locally_optimal(form, w, q, opts.psd_tol)
                              ? Certificate::CubeFace
                              : Certificate::Degenerate;
    }
    opt.converged = opt.certificate != Certificate::Degenerate;
    return opt;
}

} // namespace

namespace detail {

Optimum optimize_surface(const SurfaceForm& form, const Eigen::VectorXd& weights,
                         const OptimizeOptions& options, double surface_scale) {
    const SearchOut out = search(form, weights, options, surface_scale, 0);
    return finish(form, weights, options, surface_scale, out);
}

} // namespace detail

Optimum optimize(const CloningProblem& problem, const OptimizeOptions& options) {
    const int n = problem.count();
    const GramPair& grams = problem.grams();

    // states orthogonal to every other state decouple: their block of M is the
    // scalar [q_i], so q_i = 0 is optimal and feasible regardless of the rest
    std::vector<int> kept, dropped;
    for (int i = 0; i < n; ++i) {
        bool orthogonal = true;
        for (int j = 0; j < n && orthogonal; ++j) {
            if (j == i) continue;
            orthogonal = std::abs(grams.x_m(i, j)) <= 1e-15 &&
                         std::abs(grams.x_n_p(i, j)) <= 1e-15;
        }
        (orthogonal ? dropped : kept).push_back(i);
    }

    Eigen::VectorXd q_full = Eigen::VectorXd::Zero(n);
    Optimum sub;
    if (kept.empty()) {
        sub.converged = true;
    } else if (static_cast<int>(kept.size()) == n) {
        sub = detail::optimize_surface(detail::surface_form(problem),
                                       problem.priors(), options,
                                       problem.surface_scale());
        q_full = sub.q_star.q;
    } else {
        const int nk = static_cast<int>(kept.size());
        detail::SurfaceForm form;
        form.a = Eigen::MatrixXcd(nk, nk);
        form.b = Eigen::MatrixXcd(nk, nk);
        Eigen::VectorXd w(nk);
        for (int i = 0; i < nk; ++i) {
            w(i) = problem.priors()(kept[i]);
            for (int j = 0; j < nk; ++j) {
                form.a(i, j) = grams.x_m(kept[i], kept[j]);
                form.b(i, j) = grams.x_n_p(kept[i], kept[j]);
            }
        }
        sub = detail::optimize_surface(form, w, options, problem.surface_scale());
        for (int i = 0; i < nk; ++i) q_full(kept[i]) = sub.q_star.q(i);
    }

    Optimum opt;
    opt.q_star = ParameterPoint::create(q_full);
    opt.Q = problem.priors().dot(q_full);
    opt.success = 1.0 - opt.Q;
    const FeasibilityReport report = check(problem, opt.q_star, options.psd_tol);
    opt.det_at_opt = report.det;
    opt.gradient_residual = sub.gradient_residual;
    opt.converged = sub.converged;
    if (dropped.empty()) {
        opt.certificate = sub.certificate;
    } else {
        // points with coordinates on the cube are face optima even when the
        // free block ended at an interior tangency
        opt.certificate = sub.converged ? Certificate::CubeFace
                                        : Certificate::Degenerate;
        opt.gradient_residual = kNaN;
    }
    return opt;
}

namespace {

// feasibility margin of the two-state modulus curve: phi >= 0 iff (q1,q2) is
// realizable for the canonical nonnegative-real overlap and flag magnitudes
struct TwoStateCurve {
    double s_m;   // |s|^m
    double k;     // |alpha| |s|^n

    double phi(double q1, double q2) const {
        return std::sqrt(q1 * q2) + std::sqrt((1.0 - q1) * (1.0 - q2)) * k - s_m;
    }

    // maximizer of phi over q2 at fixed q1
    double peak(double q1) const {
        if (k <= 0.0) return 1.0;
        return q1 / (q1 + (1.0 - q1) * k * k);
    }

    // smallest feasible q2 at fixed q1, or nothing if the slice is infeasible
    std::optional<double> lowest_feasible(double q1) const {
        const double top = std::min(peak(q1), 1.0);
        if (phi(q1, top) < 0.0) return std::nullopt;
        if (phi(q1, 0.0) >= 0.0) return 0.0;
        double lo = 0.0, hi = top;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (phi(q1, mid) >= 0.0 ? hi : lo) = mid;
        }
        return hi;
    }
};

} // namespace

Optimum optimize_two(const StateSet& states, int m, int n, double alpha_mag,
                     const Eigen::Vector2d& priors, const OptimizeOptions& options) {
    if (states.count() != 2) {
        fail("InvariantViolation", "optimize_two requires exactly two states");
    }
    if (!(alpha_mag >= 0.0 && alpha_mag <= 1.0)) {
        fail("InvariantViolation", "alpha magnitude must lie in [0,1]");
    }
    if (m < 1 || n <= m) {
        fail("InvariantViolation", "copy counts require n > m >= 1");
    }
    const double s_abs = std::abs(compute_overlaps(states)(0, 1));

    // canonical real form used for reporting det and the certificate
    const double s_m = std::pow(s_abs, m);
    const double k = alpha_mag * std::pow(s_abs, n);
    detail::SurfaceForm form;
    form.a = Eigen::MatrixXcd(2, 2);
    form.a << 1.0, s_m, s_m, 1.0;
    form.b = Eigen::MatrixXcd(2, 2);
    form.b << 1.0, k, k, 1.0;
    const double scale = std::max(1.0, std::pow(1.0 + s_m, 2));

    const Eigen::VectorXd w = priors;
    const auto assemble = [&](double q1, double q2) {
        SearchOut out{Eigen::Vector2d(q1, q2), true};
        OptimizeOptions reporting = options;
        return finish(form, w, reporting, scale, out);
    };

    if (s_abs == 0.0) {
        return assemble(0.0, 0.0);
    }

    const TwoStateCurve curve{s_m, k};

    // the q1-projection of the feasible set is an interval ending at 1
    double x_min = 0.0;
    if (!curve.lowest_feasible(0.0)) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (curve.lowest_feasible(mid) ? hi : lo) = mid;
        }
        x_min = hi;
    }

    const auto objective = [&](double q1) {
        const auto q2 = curve.lowest_feasible(q1);
        if (!q2) return std::numeric_limits<double>::infinity();
        return w(0) * q1 + w(1) * *q2;
    };

    // scan, then golden section on the best bracket
    const int scan_points = 4096;
    double best_x = 1.0, best_f = objective(1.0);
    for (int i = 0; i <= scan_points; ++i) {
        const double x = x_min + (1.0 - x_min) * double(i) / double(scan_points);
        const double f = objective(x);
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    const double span = (1.0 - x_min) / double(scan_points);
    double lo = std::max(x_min, best_x - span);
    double hi = std::min(1.0, best_x + span);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 160; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = objective(x2);
        }
    }
    double q1 = 0.5 * (lo + hi);
    double q2 = curve.lowest_feasible(q1).value_or(1.0);

    // interior Lagrange polish: w parallel to grad phi on the curve
    const double margin = 1e-9;
    if (q1 > margin && q1 < 1.0 - margin && q2 > margin && q2 < 1.0 - margin) {
        const auto grad_phi = [&](double a, double b) {
            return Eigen::Vector2d(
                0.5 * std::sqrt(b / a) - 0.5 * curve.k * std::sqrt((1.0 - b) / (1.0 - a)),
                0.5 * std::sqrt(a / b) - 0.5 * curve.k * std::sqrt((1.0 - a) / (1.0 - b)));
        };
        Eigen::Vector3d z(q1, q2, 0.0);
        {
            const Eigen::Vector2d g0 = grad_phi(z(0), z(1));
            z(2) = w.dot(g0) / g0.dot(g0);
        }
        const auto res = [&](const Eigen::Vector3d& zz) {
            const Eigen::Vector2d g = grad_phi(zz(0), zz(1));
            return Eigen::Vector3d(w(0) - zz(2) * g(0), w(1) - zz(2) * g(1),
                                   curve.phi(zz(0), zz(1)));
        };
        Eigen::Vector3d r = res(z);
        for (int it = 0; it < 40 && r.norm() > 1e-14; ++it) {
            Eigen::Matrix3d jac;
            const double h = 1e-7;
            for (int c = 0; c < 3; ++c) {
                Eigen::Vector3d zp = z, zm = z;
                zp(c) += h;
                zm(c) -= h;
                jac.col(c) = (res(zp) - res(zm)) / (2.0 * h);
            }
            const Eigen::Vector3d step = jac.fullPivLu().solve(-r);
            if (!step.allFinite()) break;
            bool accepted = false;
            double alpha = 1.0;
            for (int kk = 0; kk < 10; ++kk, alpha *= 0.5) {
                Eigen::Vector3d z_try = z + alpha * step;
                z_try(0) = std::clamp(z_try(0), margin, 1.0 - margin);
                z_try(1) = std::clamp(z_try(1), margin, 1.0 - margin);
                const Eigen::Vector3d r_try = res(z_try);
                if (r_try.norm() < r.norm()) {
                    z = z_try;
                    r = r_try;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        if (curve.lowest_feasible(z(0))) {
            q1 = z(0);
            q2 = curve.lowest_feasible(q1).value(); // back onto the curve exactly
        }
    }

    return assemble(q1, q2);
}

Optimum optimize_two(const CloningProblem& problem, const OptimizeOptions& options) {
    if (problem.count() != 2) {
        fail("InvariantViolation", "optimize_two requires exactly two states");
    }
    const double alpha_mag = std::abs(problem.alpha().entries(0, 1));
    return optimize_two(problem.states(), problem.m(), problem.n(), alpha_mag,
                        Eigen::Vector2d(problem.priors()(0), problem.priors()(1)),
                        options);
}

Optimum identify(const StateSet& states, const Eigen::VectorXd& priors, int m,
                 const OptimizeOptions& options) {
    const CloningProblem problem = CloningProblem::create(
        states, m, m + 1, AlphaGram::identity(states.count()), priors);
    return optimize(problem, options);
}

std::vector<ParameterPoint> surface_mesh(const CloningProblem& problem,
                                         int resolution,
                                         const OptimizeOptions& options) {
    if (problem.count() != 3) {
        fail("UnsupportedDimension", "surface mesh is defined for N = 3");
    }
    if (resolution < 2) {
        fail("InvariantViolation", "resolution must be >= 2");
    }
    const detail::SurfaceForm form = detail::surface_form(problem);
    std::vector<ParameterPoint> mesh;
    mesh.reserve(std::size_t(resolution) * resolution);
    const double half_pi = 2.0 * std::atan(1.0);
    for (int i = 0; i < resolution; ++i) {
        const double theta = (i + 0.5) * half_pi / resolution;
        for (int j = 0; j < resolution; ++j) {
            const double phi = (j + 0.5) * half_pi / resolution;
            Eigen::Vector3d d(std::sin(theta) * std::cos(phi),
                              std::sin(theta) * std::sin(phi), std::cos(theta));
            const auto hit =
                detail::boundary_ray(form, d, options.psd_tol, options.bisect_iters);
            mesh.push_back(ParameterPoint::create(hit.q));
        }
    }
    return mesh;
}

} // namespace pqclone
