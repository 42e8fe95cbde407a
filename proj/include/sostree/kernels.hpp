#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sostree::kernels {

enum class Backend { scalar, avx2, neon };

std::string backend_name(Backend b);

/// Backends usable on this machine; always contains Backend::scalar.
std::vector<Backend> available_backends();

/// Backend used by the batch kernels below. Defaults to the widest available
/// one; override with set_backend (throws std::invalid_argument when the
/// requested backend is not available here).
Backend active_backend();
void set_backend(Backend b);

// Batch defect evaluators used by the grid scans. Every backend performs the
// same operations in the same order, fused multiply-adds included, so results
// are bitwise identical across backends.

/// f(y) = theta*y^(k+1) - y^k + y - 2*theta
void x1_defect(const double* y, double* out, size_t n, double theta, int k);

/// g(y) = theta*y^3 - y^2 + (bigq+1)*y - 2*theta
void psos_x1_defect(const double* y, double* out, size_t n, double theta, double bigq);

/// Sign-equivalent defect of the off-diagonal branch for general k:
/// P(x) = (theta^2*(x^k+1) + s)^k - theta^(k-1)*s*(s+1)^k, s = x + ... + x^(k-1)
void xne1_defect(const double* x, double* out, size_t n, double theta, int k);

/// Finite-p analogue at k = 2, with q = 1 - bigq:
/// P(x) = ((theta^2-bigq)*(x^2+1) + q*x)^2 - theta*q^2*h*(x+1)^2,
/// h = q*x - bigq*(x^2+1)
void psos_xne1_defect(const double* x, double* out, size_t n, double theta, double bigq);

}  // namespace sostree::kernels
