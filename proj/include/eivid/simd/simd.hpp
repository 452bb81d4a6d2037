#pragma once

#include <cstddef>

// Data-parallel inner-loop kernels with runtime backend selection.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant compiled in a separate translation unit. The active
// backend is chosen once at startup from CPU capabilities and can be
// overridden (e.g. to cross-check the two implementations in tests).
// All higher-level linear algebra in this library funnels through these
// entry points.

namespace eivid::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
    // sum_i a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha*x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // x[i] *= alpha
    void (*scal)(double alpha, double* x, std::size_t n);
    const char* name;
};

const KernelTable& scalar_kernels();
// nullptr when this build or CPU cannot run AVX2+FMA code.
const KernelTable* avx2_kernels();

Backend active_backend();
const char* backend_name();
// Throws std::invalid_argument when the requested backend is unavailable.
void force_backend(Backend backend);

namespace detail {
extern const KernelTable* active;
}

inline double dot(const double* a, const double* b, std::size_t n) {
    return detail::active->dot(a, b, n);
}

inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
    detail::active->axpy(alpha, x, y, n);
}

inline void scal(double alpha, double* x, std::size_t n) {
    detail::active->scal(alpha, x, n);
}

}  // namespace eivid::simd
