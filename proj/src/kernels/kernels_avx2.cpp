// AVX2 backend: 4 parameter points per iteration. Mirrors the scalar kernel's
// operation order with mul/add/sub/sqrt only (no FMA), so lane results are
// bit-identical to the scalar reference.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace pqclone::kernels {

namespace {

struct MinorTracker {
    __m256d any_neg = _mm256_setzero_pd();
    __m256d all_pos;
    __m256d band, neg_band;

    explicit MinorTracker(double b)
        : all_pos(_mm256_castsi256_pd(_mm256_set1_epi64x(-1))),
          band(_mm256_set1_pd(b)),
          neg_band(_mm256_set1_pd(-b)) {}

    void feed(__m256d minor) {
        any_neg = _mm256_or_pd(any_neg, _mm256_cmp_pd(minor, neg_band, _CMP_LE_OQ));
        all_pos = _mm256_and_pd(all_pos, _mm256_cmp_pd(minor, band, _CMP_GE_OQ));
    }

    void store(PointClass* cls) const {
        const int neg_mask = _mm256_movemask_pd(any_neg);
        const int pos_mask = _mm256_movemask_pd(all_pos);
        for (int lane = 0; lane < 4; ++lane) {
            if (neg_mask & (1 << lane)) {
                cls[lane] = PointClass::Infeasible;
            } else if (pos_mask & (1 << lane)) {
                cls[lane] = PointClass::Feasible;
            } else {
                cls[lane] = PointClass::Uncertain;
            }
        }
    }
};

void classify2_avx2(const CompiledFeasibility& cf, const double* q0s, const double* q1s,
                    std::size_t count, PointClass* cls, double* dets) {
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d xm_re = _mm256_set1_pd(cf.xm_re[0]);
    const __m256d xm_im = _mm256_set1_pd(cf.xm_im[0]);
    const __m256d xnp_re = _mm256_set1_pd(cf.xnp_re[0]);
    const __m256d xnp_im = _mm256_set1_pd(cf.xnp_im[0]);

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d q0 = _mm256_loadu_pd(q0s + i);
        const __m256d q1 = _mm256_loadu_pd(q1s + i);
        const __m256d sp0 = _mm256_sqrt_pd(_mm256_sub_pd(ones, q0));
        const __m256d sp1 = _mm256_sqrt_pd(_mm256_sub_pd(ones, q1));
        const __m256d t01 = _mm256_mul_pd(sp0, sp1);
        const __m256d mre = _mm256_sub_pd(xm_re, _mm256_mul_pd(t01, xnp_re));
        const __m256d mim = _mm256_sub_pd(xm_im, _mm256_mul_pd(t01, xnp_im));
        const __m256d a01 =
            _mm256_add_pd(_mm256_mul_pd(mre, mre), _mm256_mul_pd(mim, mim));
        const __m256d det = _mm256_sub_pd(_mm256_mul_pd(q0, q1), a01);

        MinorTracker tracker(cf.band);
        tracker.feed(q0);
        tracker.feed(q1);
        tracker.feed(det);
        tracker.store(cls + i);
        _mm256_storeu_pd(dets + i, det);
    }
    if (i < count) {
        const double* tail[2] = {q0s + i, q1s + i};
        classify_batch_scalar_impl(cf, tail, count - i, cls + i, dets + i);
    }
}

void classify3_avx2(const CompiledFeasibility& cf, const double* q0s, const double* q1s,
                    const double* q2s, std::size_t count, PointClass* cls,
                    double* dets) {
    const __m256d ones = _mm256_set1_pd(1.0);
    __m256d xm_re[3], xm_im[3], xnp_re[3], xnp_im[3];
    for (int k = 0; k < 3; ++k) {
        xm_re[k] = _mm256_set1_pd(cf.xm_re[k]);
        xm_im[k] = _mm256_set1_pd(cf.xm_im[k]);
        xnp_re[k] = _mm256_set1_pd(cf.xnp_re[k]);
        xnp_im[k] = _mm256_set1_pd(cf.xnp_im[k]);
    }

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d q0 = _mm256_loadu_pd(q0s + i);
        const __m256d q1 = _mm256_loadu_pd(q1s + i);
        const __m256d q2 = _mm256_loadu_pd(q2s + i);
        const __m256d sp0 = _mm256_sqrt_pd(_mm256_sub_pd(ones, q0));
        const __m256d sp1 = _mm256_sqrt_pd(_mm256_sub_pd(ones, q1));
        const __m256d sp2 = _mm256_sqrt_pd(_mm256_sub_pd(ones, q2));
        const __m256d t01 = _mm256_mul_pd(sp0, sp1);
        const __m256d t02 = _mm256_mul_pd(sp0, sp2);
        const __m256d t12 = _mm256_mul_pd(sp1, sp2);

        const __m256d m01re = _mm256_sub_pd(xm_re[0], _mm256_mul_pd(t01, xnp_re[0]));
        const __m256d m01im = _mm256_sub_pd(xm_im[0], _mm256_mul_pd(t01, xnp_im[0]));
        const __m256d m02re = _mm256_sub_pd(xm_re[1], _mm256_mul_pd(t02, xnp_re[1]));
        const __m256d m02im = _mm256_sub_pd(xm_im[1], _mm256_mul_pd(t02, xnp_im[1]));
        const __m256d m12re = _mm256_sub_pd(xm_re[2], _mm256_mul_pd(t12, xnp_re[2]));
        const __m256d m12im = _mm256_sub_pd(xm_im[2], _mm256_mul_pd(t12, xnp_im[2]));

        const __m256d a01 =
            _mm256_add_pd(_mm256_mul_pd(m01re, m01re), _mm256_mul_pd(m01im, m01im));
        const __m256d a02 =
            _mm256_add_pd(_mm256_mul_pd(m02re, m02re), _mm256_mul_pd(m02im, m02im));
        const __m256d a12 =
            _mm256_add_pd(_mm256_mul_pd(m12re, m12re), _mm256_mul_pd(m12im, m12im));

        const __m256d d01 = _mm256_sub_pd(_mm256_mul_pd(q0, q1), a01);
        const __m256d d02 = _mm256_sub_pd(_mm256_mul_pd(q0, q2), a02);
        const __m256d d12 = _mm256_sub_pd(_mm256_mul_pd(q1, q2), a12);

        // tri = Re(m01 * m12 * conj(m02))
        const __m256d tr =
            _mm256_sub_pd(_mm256_mul_pd(m01re, m12re), _mm256_mul_pd(m01im, m12im));
        const __m256d ti =
            _mm256_add_pd(_mm256_mul_pd(m01re, m12im), _mm256_mul_pd(m01im, m12re));
        const __m256d tri =
            _mm256_add_pd(_mm256_mul_pd(tr, m02re), _mm256_mul_pd(ti, m02im));

        __m256d det = _mm256_mul_pd(_mm256_mul_pd(q0, q1), q2);
        det = _mm256_sub_pd(det, _mm256_mul_pd(q0, a12));
        det = _mm256_sub_pd(det, _mm256_mul_pd(q1, a02));
        det = _mm256_sub_pd(det, _mm256_mul_pd(q2, a01));
        det = _mm256_add_pd(det, _mm256_add_pd(tri, tri));

        MinorTracker tracker(cf.band);
        tracker.feed(q0);
        tracker.feed(q1);
        tracker.feed(q2);
        tracker.feed(d01);
        tracker.feed(d02);
        tracker.feed(d12);
        tracker.feed(det);
        tracker.store(cls + i);
        _mm256_storeu_pd(dets + i, det);
    }
    if (i < count) {
        const double* tail[3] = {q0s + i, q1s + i, q2s + i};
        classify_batch_scalar_impl(cf, tail, count - i, cls + i, dets + i);
    }
}

} // namespace

void classify_batch_avx2(const CompiledFeasibility& cf, const double* const q[],
                         std::size_t count, PointClass* cls, double* dets) {
    switch (cf.n) {
        case 2:
            classify2_avx2(cf, q[0], q[1], count, cls, dets);
            break;
        case 3:
            classify3_avx2(cf, q[0], q[1], q[2], count, cls, dets);
            break;
        default:
            // N = 4 sweeps are scalar by design
            classify_batch_scalar_impl(cf, q, count, cls, dets);
            break;
    }
}

} // namespace pqclone::kernels

#endif // x86_64
