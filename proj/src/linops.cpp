#include "eivid/linops.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "eivid/simd/simd.hpp"

namespace eivid {

SelectionOperator::SelectionOperator(int ambient_dim, std::vector<int> times_in)
    : ambient_dim(ambient_dim), times(std::move(times_in)) {
    if (ambient_dim < 0) throw std::invalid_argument("SelectionOperator: negative ambient_dim");
    int prev = 0;
    for (int t : times) {
        if (t <= prev) {
            throw std::invalid_argument("SelectionOperator: times must be strictly increasing");
        }
        if (t < 1 || t > ambient_dim) {
            throw std::invalid_argument("SelectionOperator: time " + std::to_string(t) +
                                        " outside [1, " + std::to_string(ambient_dim) + "]");
        }
        prev = t;
    }
}

SelectionOperator SelectionOperator::full(int ambient_dim) {
    std::vector<int> all(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) all[i] = i + 1;
    return SelectionOperator(ambient_dim, std::move(all));
}

Vec SelectionOperator::select(const Vec& x) const {
    if (static_cast<int>(x.size()) != ambient_dim) {
        throw std::invalid_argument("select: vector length != ambient_dim");
    }
    Vec out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) out[k] = x[times[k] - 1];
    return out;
}

Vec SelectionOperator::scatter(const Vec& z) const {
    if (z.size() != times.size()) {
        throw std::invalid_argument("scatter: vector length != selection size");
    }
    Vec out(ambient_dim, 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) out[times[k] - 1] = z[k];
    return out;
}

Vec SelectionOperator::mask() const {
    Vec out(ambient_dim, 0.0);
    for (int t : times) out[t - 1] = 1.0;
    return out;
}

ToeplitzMatrix::ToeplitzMatrix(Vec source_in, int m, int n)
    : source(std::move(source_in)), rows(m), cols(n) {
    if (m < 1 || n < 1) throw std::invalid_argument("toeplitz: non-positive dimensions");
    if (source.empty()) throw std::invalid_argument("toeplitz: empty coefficient vector");
    source_rev.assign(source.rbegin(), source.rend());
}

double ToeplitzMatrix::entry(int i, int j) const {
    const int k = i - j;
    if (k < 0 || k >= static_cast<int>(source.size())) return 0.0;
    return source[k];
}

Matrix ToeplitzMatrix::dense() const {
    Matrix a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j <= std::min(i, cols - 1); ++j) a(i, j) = entry(i, j);
    return a;
}

const double* ToeplitzMatrix::row_window(int i, int* len) const {
    // Row i holds source[i-j] for j = max(0, i-L+1) .. min(i, cols-1); in the
    // reversed source this is the contiguous run starting at L-1-i (clamped).
    const int L = static_cast<int>(source.size());
    const int j_hi = std::min(i, cols - 1);
    const int j_lo = std::max(0, i - L + 1);
    *len = j_hi - j_lo + 1;
    if (*len <= 0) {
        *len = 0;
        return source_rev.data();
    }
    return source_rev.data() + (L - 1 - i + j_lo);
}

Vec ToeplitzMatrix::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("toeplitz apply: length");
    Vec y(rows, 0.0);
    for (int i = 0; i < rows; ++i) {
        int len = 0;
        const double* w = row_window(i, &len);
        const int j_lo = std::max(0, i - static_cast<int>(source.size()) + 1);
        if (len > 0) y[i] = simd::dot(w, x.data() + j_lo, len);
    }
    return y;
}

Vec ToeplitzMatrix::apply_transpose(const Vec& x) const {
    if (static_cast<int>(x.size()) != rows) {
        throw std::invalid_argument("toeplitz apply_transpose: length");
    }
    // (Tᵀ x)_j = sum_i source[i-j] x_i : a forward correlation, contiguous in
    // both arrays.
    const int L = static_cast<int>(source.size());
    Vec y(cols, 0.0);
    for (int j = 0; j < cols; ++j) {
        const int len = std::min(L, rows - j);
        if (len > 0) y[j] = simd::dot(source.data(), x.data() + j, len);
    }
    return y;
}

Matrix toeplitz(const Vec& a, int m, int n) { return ToeplitzMatrix(a, m, n).dense(); }

Vec shift_apply(const Vec& x, int k) {
    if (k < 0) throw std::invalid_argument("shift_apply: negative shift");
    const int n = static_cast<int>(x.size());
    Vec y(n, 0.0);
    for (int i = 0; i + k < n; ++i) y[i] = x[i + k];
    return y;
}

Vec zero_pad(Vec a, int n) {
    a.resize(n, 0.0);
    return a;
}

}  // namespace eivid
