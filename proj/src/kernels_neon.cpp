#include <arm_neon.h>

#include "kernels_impl.hpp"

// NEON mirrors of the scalar kernels: same operations, same order, two lanes
// at a time; the tail falls through to the scalar table. Kept free of libc
// includes so the file also builds freestanding.

namespace sostree::kernels {
namespace {

void x1_neon(const double* y, double* out, size_t n, double theta, int k) {
    const float64x2_t theta_v = vdupq_n_f64(theta);
    const float64x2_t two_theta = vdupq_n_f64(2.0 * theta);
    const float64x2_t one = vdupq_n_f64(1.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t yi = vld1q_f64(y + i);
        const float64x2_t ty = vmulq_f64(theta_v, yi);
        const float64x2_t a = vfmaq_f64(vnegq_f64(yi), ty, yi);
        float64x2_t t = one;
        for (int j = 1; j < k; ++j) t = vmulq_f64(t, yi);
        const float64x2_t c = vsubq_f64(yi, two_theta);
        vst1q_f64(out + i, vfmaq_f64(c, t, a));
    }
    if (i < n) kScalarTable.x1(y + i, out + i, n - i, theta, k);
}

void psos_x1_neon(const double* y, double* out, size_t n, double theta, double bigq) {
    const float64x2_t theta_v = vdupq_n_f64(theta);
    const float64x2_t mone = vdupq_n_f64(-1.0);
    const float64x2_t qp1 = vdupq_n_f64(bigq + 1.0);
    const float64x2_t m2t = vdupq_n_f64(-2.0 * theta);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t yi = vld1q_f64(y + i);
        float64x2_t acc = vfmaq_f64(mone, theta_v, yi);
        acc = vfmaq_f64(qp1, acc, yi);
        vst1q_f64(out + i, vfmaq_f64(m2t, acc, yi));
    }
    if (i < n) kScalarTable.psos_x1(y + i, out + i, n - i, theta, bigq);
}

void xne1_neon(const double* x, double* out, size_t n, double theta, int k) {
    double tkm1s = 1.0;
    for (int j = 1; j < k; ++j) tkm1s *= theta;
    const float64x2_t theta2 = vdupq_n_f64(theta * theta);
    const float64x2_t tkm1 = vdupq_n_f64(tkm1s);
    const float64x2_t one = vdupq_n_f64(1.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xi = vld1q_f64(x + i);
        float64x2_t s = xi;
        for (int j = 2; j < k; ++j) s = vfmaq_f64(xi, s, xi);
        float64x2_t xk = xi;
        for (int j = 2; j <= k; ++j) xk = vmulq_f64(xk, xi);
        const float64x2_t t1 = vaddq_f64(xk, one);
        const float64x2_t num = vfmaq_f64(s, theta2, t1);
        float64x2_t numk = num;
        for (int j = 2; j <= k; ++j) numk = vmulq_f64(numk, num);
        const float64x2_t sp1 = vaddq_f64(s, one);
        float64x2_t sp1k = sp1;
        for (int j = 2; j <= k; ++j) sp1k = vmulq_f64(sp1k, sp1);
        const float64x2_t ts = vmulq_f64(tkm1, s);
        vst1q_f64(out + i, vfmsq_f64(numk, ts, sp1k));
    }
    if (i < n) kScalarTable.xne1(x + i, out + i, n - i, theta, k);
}

void psos_xne1_neon(const double* x, double* out, size_t n, double theta, double bigq) {
    const double qs = 1.0 - bigq;
    const float64x2_t q = vdupq_n_f64(qs);
    const float64x2_t mq = vdupq_n_f64(-bigq);
    const float64x2_t tq2 = vdupq_n_f64(theta * (qs * qs));
    const float64x2_t one = vdupq_n_f64(1.0);
    // the scalar kernel forms theta^2 - Q with a fused multiply-add
    const float64x2_t c1 = vfmaq_f64(vdupq_n_f64(-bigq), vdupq_n_f64(theta), vdupq_n_f64(theta));
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xi = vld1q_f64(x + i);
        const float64x2_t x2 = vmulq_f64(xi, xi);
        const float64x2_t t1 = vaddq_f64(x2, one);
        const float64x2_t qx = vmulq_f64(q, xi);
        const float64x2_t num = vfmaq_f64(qx, c1, t1);
        const float64x2_t h = vfmaq_f64(qx, mq, t1);
        const float64x2_t num2 = vmulq_f64(num, num);
        const float64x2_t xp1 = vaddq_f64(xi, one);
        const float64x2_t xp12 = vmulq_f64(xp1, xp1);
        const float64x2_t hh = vmulq_f64(tq2, h);
        vst1q_f64(out + i, vfmsq_f64(num2, hh, xp12));
    }
    if (i < n) kScalarTable.psos_xne1(x + i, out + i, n - i, theta, bigq);
}

}  // namespace

const KernelTable kNeonTable = {x1_neon, psos_x1_neon, xne1_neon, psos_xne1_neon};

}  // namespace sostree::kernels
