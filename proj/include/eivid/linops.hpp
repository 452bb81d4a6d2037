#pragma once

#include <vector>

#include "eivid/linalg.hpp"

// Structured linear operators: observation selection (row-subset operators
// kept as index sets, never materialized densely) and lower-triangular
// banded Toeplitz matrices built from a coefficient vector.
//
// Time indices are 1-based at every interface in this library.

namespace eivid {

// Row-subset operator P mapping a length-N vector to its entries at `times`.
// P Pᵀ = I by construction; Pᵀ P is the 0/1 diagonal returned by mask().
struct SelectionOperator {
    SelectionOperator(int ambient_dim, std::vector<int> times);
    static SelectionOperator full(int ambient_dim);

    int ambient_dim = 0;
    std::vector<int> times;  // strictly increasing, each in [1, ambient_dim]

    int count() const { return static_cast<int>(times.size()); }
    bool is_full() const { return count() == ambient_dim; }

    // P x : gather the selected entries.
    Vec select(const Vec& x) const;
    // Pᵀ z : scatter into a zero vector of the ambient dimension.
    Vec scatter(const Vec& z) const;
    // diag(Pᵀ P) as a 0/1 vector of length ambient_dim.
    Vec mask() const;

    bool operator==(const SelectionOperator&) const = default;
};

// m x n matrix with entries A(i,j) = a[i-j] (0-based) when 0 <= i-j < len(a),
// zero otherwise: lower-triangular banded, constant along diagonals.
struct ToeplitzMatrix {
    ToeplitzMatrix(Vec source, int rows, int cols);

    Vec source;
    Vec source_rev;  // reversed copy; makes row windows contiguous
    int rows = 0, cols = 0;

    double entry(int i, int j) const;  // 0-based
    Matrix dense() const;
    // Row i of the matrix is source reversed into [i-cols+1, i]; this
    // returns the contiguous window and its length so callers can run
    // kernels straight over it.
    const double* row_window(int i, int* len) const;

    Vec apply(const Vec& x) const;            // T x
    Vec apply_transpose(const Vec& x) const;  // Tᵀ x
};

// The Toeplitz operator as a dense matrix.
Matrix toeplitz(const Vec& a, int m, int n);

// (Sᵏ x)_i = x_{i+k}, zero-filled at the end; S is the upward shift.
Vec shift_apply(const Vec& x, int k);

// Zero-pad or truncate to length n.
Vec zero_pad(Vec a, int n);

}  // namespace eivid
