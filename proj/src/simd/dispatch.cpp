#include "eivid/simd/simd.hpp"

#include <stdexcept>

namespace eivid::simd {

namespace detail {

namespace {
const KernelTable* detect_best() {
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}
}  // namespace

const KernelTable* active = detect_best();

}  // namespace detail

Backend active_backend() {
    return detail::active == avx2_kernels() ? Backend::avx2 : Backend::scalar;
}

const char* backend_name() { return detail::active->name; }

void force_backend(Backend backend) {
    switch (backend) {
        case Backend::scalar:
            detail::active = &scalar_kernels();
            return;
        case Backend::avx2:
            if (const KernelTable* t = avx2_kernels()) {
                detail::active = t;
                return;
            }
            throw std::invalid_argument("simd: avx2 backend unavailable on this CPU/build");
    }
    throw std::invalid_argument("simd: unknown backend");
}

}  // namespace eivid::simd
