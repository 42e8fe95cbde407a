#include "sostree/kernels.hpp"

#include <stdexcept>

#include "kernels_impl.hpp"

namespace sostree::kernels {
namespace {

const KernelTable* table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return &kAvx2Table;
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return &kNeonTable;
#endif
        default:
            return nullptr;
    }
}

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
    if (b == Backend::avx2) return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#endif
#if defined(__aarch64__)
    if (b == Backend::neon) return true;
#endif
    return false;
}

Backend default_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (backend_available(Backend::avx2)) return Backend::avx2;
#endif
#if defined(__aarch64__)
    return Backend::neon;
#endif
    return Backend::scalar;
}

Backend& active_slot() {
    static Backend b = default_backend();
    return b;
}

}  // namespace

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::scalar};
    if (backend_available(Backend::avx2)) out.push_back(Backend::avx2);
    if (backend_available(Backend::neon)) out.push_back(Backend::neon);
    return out;
}

Backend active_backend() { return active_slot(); }

void set_backend(Backend b) {
    if (!backend_available(b)) throw std::invalid_argument("set_backend: backend not available: " + backend_name(b));
    active_slot() = b;
}

void x1_defect(const double* y, double* out, size_t n, double theta, int k) {
    table_for(active_slot())->x1(y, out, n, theta, k);
}

void psos_x1_defect(const double* y, double* out, size_t n, double theta, double bigq) {
    table_for(active_slot())->psos_x1(y, out, n, theta, bigq);
}

void xne1_defect(const double* x, double* out, size_t n, double theta, int k) {
    table_for(active_slot())->xne1(x, out, n, theta, k);
}

void psos_xne1_defect(const double* x, double* out, size_t n, double theta, double bigq) {
    table_for(active_slot())->psos_xne1(x, out, n, theta, bigq);
}

}  // namespace sostree::kernels
