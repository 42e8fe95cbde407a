#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

// AVX2/FMA mirrors of the scalar kernels: same operations, same order, four
// lanes at a time; the tail falls through to the scalar table.

namespace sostree::kernels {
namespace {

void x1_avx2(const double* y, double* out, size_t n, double theta, int k) {
    const __m256d theta_v = _mm256_set1_pd(theta);
    const __m256d two_theta = _mm256_set1_pd(2.0 * theta);
    const __m256d one = _mm256_set1_pd(1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yi = _mm256_loadu_pd(y + i);
        const __m256d ty = _mm256_mul_pd(theta_v, yi);
        const __m256d a = _mm256_fmsub_pd(ty, yi, yi);
        __m256d t = one;
        for (int j = 1; j < k; ++j) t = _mm256_mul_pd(t, yi);
        const __m256d c = _mm256_sub_pd(yi, two_theta);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(t, a, c));
    }
    if (i < n) kScalarTable.x1(y + i, out + i, n - i, theta, k);
}

void psos_x1_avx2(const double* y, double* out, size_t n, double theta, double bigq) {
    const __m256d theta_v = _mm256_set1_pd(theta);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d qp1 = _mm256_set1_pd(bigq + 1.0);
    const __m256d m2t = _mm256_set1_pd(-2.0 * theta);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yi = _mm256_loadu_pd(y + i);
        __m256d acc = _mm256_fmsub_pd(theta_v, yi, one);
        acc = _mm256_fmadd_pd(acc, yi, qp1);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(acc, yi, m2t));
    }
    if (i < n) kScalarTable.psos_x1(y + i, out + i, n - i, theta, bigq);
}

void xne1_avx2(const double* x, double* out, size_t n, double theta, int k) {
    double tkm1s = 1.0;
    for (int j = 1; j < k; ++j) tkm1s *= theta;
    const __m256d theta2 = _mm256_set1_pd(theta * theta);
    const __m256d tkm1 = _mm256_set1_pd(tkm1s);
    const __m256d one = _mm256_set1_pd(1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        __m256d s = xi;
        for (int j = 2; j < k; ++j) s = _mm256_fmadd_pd(s, xi, xi);
        __m256d xk = xi;
        for (int j = 2; j <= k; ++j) xk = _mm256_mul_pd(xk, xi);
        const __m256d t1 = _mm256_add_pd(xk, one);
        const __m256d num = _mm256_fmadd_pd(theta2, t1, s);
        __m256d numk = num;
        for (int j = 2; j <= k; ++j) numk = _mm256_mul_pd(numk, num);
        const __m256d sp1 = _mm256_add_pd(s, one);
        __m256d sp1k = sp1;
        for (int j = 2; j <= k; ++j) sp1k = _mm256_mul_pd(sp1k, sp1);
        const __m256d ts = _mm256_mul_pd(tkm1, s);
        _mm256_storeu_pd(out + i, _mm256_fnmadd_pd(ts, sp1k, numk));
    }
    if (i < n) kScalarTable.xne1(x + i, out + i, n - i, theta, k);
}

void psos_xne1_avx2(const double* x, double* out, size_t n, double theta, double bigq) {
    const double qs = 1.0 - bigq;
    const __m256d q = _mm256_set1_pd(qs);
    const __m256d c1 = _mm256_set1_pd(std::fma(theta, theta, -bigq));
    const __m256d mq = _mm256_set1_pd(-bigq);
    const __m256d tq2 = _mm256_set1_pd(theta * (qs * qs));
    const __m256d one = _mm256_set1_pd(1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d x2 = _mm256_mul_pd(xi, xi);
        const __m256d t1 = _mm256_add_pd(x2, one);
        const __m256d qx = _mm256_mul_pd(q, xi);
        const __m256d num = _mm256_fmadd_pd(c1, t1, qx);
        const __m256d h = _mm256_fmadd_pd(mq, t1, qx);
        const __m256d num2 = _mm256_mul_pd(num, num);
        const __m256d xp1 = _mm256_add_pd(xi, one);
        const __m256d xp12 = _mm256_mul_pd(xp1, xp1);
        const __m256d hh = _mm256_mul_pd(tq2, h);
        _mm256_storeu_pd(out + i, _mm256_fnmadd_pd(hh, xp12, num2));
    }
    if (i < n) kScalarTable.psos_xne1(x + i, out + i, n - i, theta, bigq);
}

}  // namespace

const KernelTable kAvx2Table = {x1_avx2, psos_x1_avx2, xne1_avx2, psos_xne1_avx2};

}  // namespace sostree::kernels
