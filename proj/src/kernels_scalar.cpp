#include <cmath>

#include "kernels_impl.hpp"

// Reference kernels. The operation order here is the contract every SIMD
// backend reproduces; do not reassociate.

namespace sostree::kernels {
namespace {

void x1_scalar(const double* y, double* out, size_t n, double theta, int k) {
    const double two_theta = 2.0 * theta;
    for (size_t i = 0; i < n; ++i) {
        const double yi = y[i];
        const double ty = theta * yi;
        const double a = std::fma(ty, yi, -yi);  // theta*y^2 - y
        double t = 1.0;
        for (int j = 1; j < k; ++j) t *= yi;  // y^(k-1)
        const double c = yi - two_theta;
        out[i] = std::fma(t, a, c);
    }
}

void psos_x1_scalar(const double* y, double* out, size_t n, double theta, double bigq) {
    const double qp1 = bigq + 1.0;
    const double m2t = -2.0 * theta;
    for (size_t i = 0; i < n; ++i) {
        const double yi = y[i];
        double acc = std::fma(theta, yi, -1.0);
        acc = std::fma(acc, yi, qp1);
        out[i] = std::fma(acc, yi, m2t);
    }
}

void xne1_scalar(const double* x, double* out, size_t n, double theta, int k) {
    const double theta2 = theta * theta;
    double tkm1 = 1.0;
    for (int j = 1; j < k; ++j) tkm1 *= theta;  // theta^(k-1)
    for (size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        double s = xi;
        for (int j = 2; j < k; ++j) s = std::fma(s, xi, xi);  // x + ... + x^(k-1)
        double xk = xi;
        for (int j = 2; j <= k; ++j) xk *= xi;  // x^k
        const double t1 = xk + 1.0;
        const double num = std::fma(theta2, t1, s);
        double numk = num;
        for (int j = 2; j <= k; ++j) numk *= num;
        const double sp1 = s + 1.0;
        double sp1k = sp1;
        for (int j = 2; j <= k; ++j) sp1k *= sp1;
        const double ts = tkm1 * s;
        out[i] = std::fma(-ts, sp1k, numk);
    }
}

void psos_xne1_scalar(const double* x, double* out, size_t n, double theta, double bigq) {
    const double q = 1.0 - bigq;
    const double c1 = std::fma(theta, theta, -bigq);  // theta^2 - Q
    const double mq = -bigq;
    const double tq2 = theta * (q * q);
    for (size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double x2 = xi * xi;
        const double t1 = x2 + 1.0;
        const double qx = q * xi;
        const double num = std::fma(c1, t1, qx);
        const double h = std::fma(mq, t1, qx);
        const double num2 = num * num;
        const double xp1 = xi + 1.0;
        const double xp12 = xp1 * xp1;
        const double hh = tq2 * h;
        out[i] = std::fma(-hh, xp12, num2);
    }
}

}  // namespace

const KernelTable kScalarTable = {x1_scalar, psos_x1_scalar, xne1_scalar, psos_xne1_scalar};

}  // namespace sostree::kernels
