// NEON backend: 2 parameter points per iteration. Same operation order as the
// scalar reference (no fused multiply-add), so lanes are bit-identical.

#if defined(__aarch64__)

#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace pqclone::kernels {

namespace {

struct MinorTracker {
    uint64x2_t any_neg = vdupq_n_u64(0);
    uint64x2_t all_pos = vdupq_n_u64(~0ULL);
    float64x2_t band, neg_band;

    explicit MinorTracker(double b)
        : band(vdupq_n_f64(b)), neg_band(vdupq_n_f64(-b)) {}

    void feed(float64x2_t minor) {
        any_neg = vorrq_u64(any_neg, vcleq_f64(minor, neg_band));
        all_pos = vandq_u64(all_pos, vcgeq_f64(minor, band));
    }

    void store(PointClass* cls) const {
        uint64_t neg[2], pos[2];
        vst1q_u64(neg, any_neg);
        vst1q_u64(pos, all_pos);
        for (int lane = 0; lane < 2; ++lane) {
            if (neg[lane]) {
                cls[lane] = PointClass::Infeasible;
            } else if (pos[lane]) {
                cls[lane] = PointClass::Feasible;
            } else {
                cls[lane] = PointClass::Uncertain;
            }
        }
    }
};

void classify2_neon(const CompiledFeasibility& cf, const double* q0s, const double* q1s,
                    std::size_t count, PointClass* cls, double* dets) {
    const float64x2_t ones = vdupq_n_f64(1.0);
    const float64x2_t xm_re = vdupq_n_f64(cf.xm_re[0]);
    const float64x2_t xm_im = vdupq_n_f64(cf.xm_im[0]);
    const float64x2_t xnp_re = vdupq_n_f64(cf.xnp_re[0]);
    const float64x2_t xnp_im = vdupq_n_f64(cf.xnp_im[0]);

    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        const float64x2_t q0 = vld1q_f64(q0s + i);
        const float64x2_t q1 = vld1q_f64(q1s + i);
        const float64x2_t sp0 = vsqrtq_f64(vsubq_f64(ones, q0));
        const float64x2_t sp1 = vsqrtq_f64(vsubq_f64(ones, q1));
        const float64x2_t t01 = vmulq_f64(sp0, sp1);
        const float64x2_t mre = vsubq_f64(xm_re, vmulq_f64(t01, xnp_re));
        const float64x2_t mim = vsubq_f64(xm_im, vmulq_f64(t01, xnp_im));
        const float64x2_t a01 = vaddq_f64(vmulq_f64(mre, mre), vmulq_f64(mim, mim));
        const float64x2_t det = vsubq_f64(vmulq_f64(q0, q1), a01);

        MinorTracker tracker(cf.band);
        tracker.feed(q0);
        tracker.feed(q1);
        tracker.feed(det);
        tracker.store(cls + i);
        vst1q_f64(dets + i, det);
    }
    if (i < count) {
        const double* tail[2] = {q0s + i, q1s + i};
        classify_batch_scalar_impl(cf, tail, count - i, cls + i, dets + i);
    }
}

void classify3_neon(const CompiledFeasibility& cf, const double* q0s, const double* q1s,
                    const double* q2s, std::size_t count, PointClass* cls,
                    double* dets) {
    const float64x2_t ones = vdupq_n_f64(1.0);
    float64x2_t xm_re[3], xm_im[3], xnp_re[3], xnp_im[3];
    for (int k = 0; k < 3; ++k) {
        xm_re[k] = vdupq_n_f64(cf.xm_re[k]);
        xm_im[k] = vdupq_n_f64(cf.xm_im[k]);
        xnp_re[k] = vdupq_n_f64(cf.xnp_re[k]);
        xnp_im[k] = vdupq_n_f64(cf.xnp_im[k]);
    }

    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) {
        const float64x2_t q0 = vld1q_f64(q0s + i);
        const float64x2_t q1 = vld1q_f64(q1s + i);
        const float64x2_t q2 = vld1q_f64(q2s + i);
        const float64x2_t sp0 = vsqrtq_f64(vsubq_f64(ones, q0));
        const float64x2_t sp1 = vsqrtq_f64(vsubq_f64(ones, q1));
        const float64x2_t sp2 = vsqrtq_f64(vsubq_f64(ones, q2));
        const float64x2_t t01 = vmulq_f64(sp0, sp1);
        const float64x2_t t02 = vmulq_f64(sp0, sp2);
        const float64x2_t t12 = vmulq_f64(sp1, sp2);

        const float64x2_t m01re = vsubq_f64(xm_re[0], vmulq_f64(t01, xnp_re[0]));
        const float64x2_t m01im = vsubq_f64(xm_im[0], vmulq_f64(t01, xnp_im[0]));
        const float64x2_t m02re = vsubq_f64(xm_re[1], vmulq_f64(t02, xnp_re[1]));
        const float64x2_t m02im = vsubq_f64(xm_im[1], vmulq_f64(t02, xnp_im[1]));
        const float64x2_t m12re = vsubq_f64(xm_re[2], vmulq_f64(t12, xnp_re[2]));
        const float64x2_t m12im = vsubq_f64(xm_im[2], vmulq_f64(t12, xnp_im[2]));

        const float64x2_t a01 = vaddq_f64(vmulq_f64(m01re, m01re), vmulq_f64(m01im, m01im));
        const float64x2_t a02 = vaddq_f64(vmulq_f64(m02re, m02re), vmulq_f64(m02im, m02im));
        const float64x2_t a12 = vaddq_f64(vmulq_f64(m12re, m12re), vmulq_f64(m12im, m12im));

        const float64x2_t d01 = vsubq_f64(vmulq_f64(q0, q1), a01);
        const float64x2_t d02 = vsubq_f64(vmulq_f64(q0, q2), a02);
        const float64x2_t d12 = vsubq_f64(vmulq_f64(q1, q2), a12);

        const float64x2_t tr = vsubq_f64(vmulq_f64(m01re, m12re), vmulq_f64(m01im, m12im));
        const float64x2_t ti = vaddq_f64(vmulq_f64(m01re, m12im), vmulq_f64(m01im, m12re));
        const float64x2_t tri = vaddq_f64(vmulq_f64(tr, m02re), vmulq_f64(ti, m02im));

        float64x2_t det = vmulq_f64(vmulq_f64(q0, q1), q2);
        det = vsubq_f64(det, vmulq_f64(q0, a12));
        det = vsubq_f64(det, vmulq_f64(q1, a02));
        det = vsubq_f64(det, vmulq_f64(q2, a01));
        det = vaddq_f64(det, vaddq_f64(tri, tri));

        MinorTracker tracker(cf.band);
        tracker.feed(q0);
        tracker.feed(q1);
        tracker.feed(q2);
        tracker.feed(d01);
        tracker.feed(d02);
        tracker.feed(d12);
        tracker.feed(det);
        tracker.store(cls + i);
        vst1q_f64(dets + i, det);
    }
    if (i < count) {
        const double* tail[3] = {q0s + i, q1s + i, q2s + i};
        classify_batch_scalar_impl(cf, tail, count - i, cls + i, dets + i);
    }
}

} // namespace

void classify_batch_neon(const CompiledFeasibility& cf, const double* const q[],
                         std::size_t count, PointClass* cls, double* dets) {
    switch (cf.n) {
        case 2:
            classify2_neon(cf, q[0], q[1], count, cls, dets);
            break;
        case 3:
            classify3_neon(cf, q[0], q[1], q[2], count, cls, dets);
            break;
        default:
            classify_batch_scalar_impl(cf, q, count, cls, dets);
            break;
    }
}

} // namespace pqclone::kernels

#endif // aarch64
