#include "eivid/simd/simd.hpp"

// Reference kernels. Kept deliberately plain: these define the semantics
// the vectorized variants are tested against.

namespace eivid::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

constexpr KernelTable kScalarTable{dot_scalar, axpy_scalar, scal_scalar, "scalar"};

}  // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

}  // namespace eivid::simd
