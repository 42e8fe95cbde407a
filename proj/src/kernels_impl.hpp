#pragma once

#include <cstddef>

namespace sostree::kernels {

struct KernelTable {
    void (*x1)(const double*, double*, size_t, double, int);
    void (*psos_x1)(const double*, double*, size_t, double, double);
    void (*xne1)(const double*, double*, size_t, double, int);
    void (*psos_xne1)(const double*, double*, size_t, double, double);
};

extern const KernelTable kScalarTable;

#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable kAvx2Table;
#endif
#if defined(__aarch64__)
extern const KernelTable kNeonTable;
#endif

}  // namespace sostree::kernels
