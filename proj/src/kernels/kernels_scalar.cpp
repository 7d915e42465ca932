// Scalar reference kernels. Compiled with -ffp-contract=off so the arithmetic
// matches the SIMD backends operation for operation.

#include <cmath>
#include <complex>

#include "kernels_impl.hpp"
#include "pqclone/errors.hpp"

namespace pqclone::kernels {

namespace {

inline PointClass classify_minors(const double* minors, int count, double band) {
    bool any_neg = false;
    bool all_pos = true;
    for (int k = 0; k < count; ++k) {
        any_neg = any_neg || (minors[k] <= -band);
        all_pos = all_pos && (minors[k] >= band);
    }
    if (any_neg) return PointClass::Infeasible;
    return all_pos ? PointClass::Feasible : PointClass::Uncertain;
}

void classify2(const CompiledFeasibility& cf, const double* q0s, const double* q1s,
               std::size_t count, PointClass* cls, double* dets) {
    for (std::size_t i = 0; i < count; ++i) {
        const double q0 = q0s[i], q1 = q1s[i];
        const double sp0 = std::sqrt(1.0 - q0);
        const double sp1 = std::sqrt(1.0 - q1);
        const double t01 = sp0 * sp1;
        const double mre = cf.xm_re[0] - t01 * cf.xnp_re[0];
        const double mim = cf.xm_im[0] - t01 * cf.xnp_im[0];
        const double a01 = mre * mre + mim * mim;
        const double det = q0 * q1 - a01;
        const double minors[3] = {q0, q1, det};
        cls[i] = classify_minors(minors, 3, cf.band);
        dets[i] = det;
    }
}

void classify3(const CompiledFeasibility& cf, const double* q0s, const double* q1s,
               const double* q2s, std::size_t count, PointClass* cls, double* dets) {
    for (std::size_t i = 0; i < count; ++i) {
        const double q0 = q0s[i], q1 = q1s[i], q2 = q2s[i];
        const double sp0 = std::sqrt(1.0 - q0);
        const double sp1 = std::sqrt(1.0 - q1);
        const double sp2 = std::sqrt(1.0 - q2);
        const double t01 = sp0 * sp1;
        const double t02 = sp0 * sp2;
        const double t12 = sp1 * sp2;
        const double m01re = cf.xm_re[0] - t01 * cf.xnp_re[0];
        const double m01im = cf.xm_im[0] - t01 * cf.xnp_im[0];
        const double m02re = cf.xm_re[1] - t02 * cf.xnp_re[1];
        const double m02im = cf.xm_im[1] - t02 * cf.xnp_im[1];
        const double m12re = cf.xm_re[2] - t12 * cf.xnp_re[2];
        const double m12im = cf.xm_im[2] - t12 * cf.xnp_im[2];
        const double a01 = m01re * m01re + m01im * m01im;
        const double a02 = m02re * m02re + m02im * m02im;
        const double a12 = m12re * m12re + m12im * m12im;
        const double d01 = q0 * q1 - a01;
        const double d02 = q0 * q2 - a02;
        const double d12 = q1 * q2 - a12;
        // tri = Re(m01 * m12 * conj(m02))
        const double tr = m01re * m12re - m01im * m12im;
        const double ti = m01re * m12im + m01im * m12re;
        const double tri = tr * m02re + ti * m02im;
        double det = (q0 * q1) * q2;
        det = det - q0 * a12;
        det = det - q1 * a02;
        det = det - q2 * a01;
        det = det + (tri + tri);
        const double minors[7] = {q0, q1, q2, d01, d02, d12, det};
        cls[i] = classify_minors(minors, 7, cf.band);
        dets[i] = det;
    }
}

using cd = std::complex<double>;

inline cd det3c(const cd m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

void classify4(const CompiledFeasibility& cf, const double* const q[],
               std::size_t count, PointClass* cls, double* dets) {
    // pair order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
    static constexpr int pair_of[4][4] = {{-1, 0, 1, 2},
                                          {0, -1, 3, 4},
                                          {1, 3, -1, 5},
                                          {2, 4, 5, -1}};
    for (std::size_t idx = 0; idx < count; ++idx) {
        double qv[4], sp[4];
        for (int i = 0; i < 4; ++i) {
            qv[i] = q[i][idx];
            sp[i] = std::sqrt(1.0 - qv[i]);
        }
        cd m[4][4];
        for (int i = 0; i < 4; ++i) m[i][i] = qv[i];
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                const int k = pair_of[i][j];
                const double t = sp[i] * sp[j];
                m[i][j] = cd(cf.xm_re[k] - t * cf.xnp_re[k],
                             cf.xm_im[k] - t * cf.xnp_im[k]);
                m[j][i] = std::conj(m[i][j]);
            }
        }

        double minors[15];
        int mc = 0;
        for (int i = 0; i < 4; ++i) minors[mc++] = qv[i];
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                minors[mc++] = (m[i][i] * m[j][j] - m[i][j] * m[j][i]).real();
            }
        }
        static constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
        for (const auto& t : triples) {
            cd sub[3][3];
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) sub[r][c] = m[t[r]][t[c]];
            }
            minors[mc++] = det3c(sub).real();
        }
        // det4 by Laplace expansion along the first row
        cd det4(0.0, 0.0);
        for (int j = 0; j < 4; ++j) {
            cd sub[3][3];
            int rr = 0;
            for (int r = 1; r < 4; ++r) {
                int cc = 0;
                for (int c = 0; c < 4; ++c) {
                    if (c == j) continue;
                    sub[rr][cc++] = m[r][c];
                }
                ++rr;
            }
            const cd cof = m[0][j] * det3c(sub);
            det4 += (j % 2 == 0) ? cof : -cof;
        }
        minors[mc++] = det4.real();

        cls[idx] = classify_minors(minors, 15, cf.band);
        dets[idx] = det4.real();
    }
}

} // namespace

void classify_batch_scalar_impl(const CompiledFeasibility& cf, const double* const q[],
                                std::size_t count, PointClass* cls, double* dets) {
    switch (cf.n) {
        case 2:
            classify2(cf, q[0], q[1], count, cls, dets);
            break;
        case 3:
            classify3(cf, q[0], q[1], q[2], count, cls, dets);
            break;
        case 4:
            classify4(cf, q, count, cls, dets);
            break;
        default:
            fail("InvariantViolation", "sweep kernels support N in {2,3,4}");
    }
}

} // namespace pqclone::kernels
