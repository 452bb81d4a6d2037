#include "eivid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eivid/simd/simd.hpp"

namespace eivid {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            simd::axpy(a(i, k), b.row(k), ci, b.cols());
        }
    }
    return c;
}

Vec matvec(const Matrix& a, const Vec& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    Vec y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = simd::dot(a.row(i), x.data(), a.cols());
    return y;
}

Vec matvec_transposed(const Matrix& a, const Vec& x) {
    if (a.rows() != x.size()) throw std::invalid_argument("matvec_transposed: dimension mismatch");
    Vec y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) simd::axpy(x[i], a.row(i), y.data(), a.cols());
    return y;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

void symmetrize(Matrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    return simd::dot(a.data(), b.data(), a.size());
}

double norm2(const Vec& a) { return std::sqrt(simd::dot(a.data(), a.data(), a.size())); }

double norm_fro(const Matrix& a) {
    return std::sqrt(simd::dot(a.data(), a.data(), a.rows() * a.cols()));
}

Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    simd::axpy(1.0, b.data(), r.data(), r.size());
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    simd::axpy(-1.0, b.data(), r.data(), r.size());
    return r;
}

Vec operator*(double s, Vec a) {
    simd::scal(s, a.data(), a.size());
    return a;
}

namespace {

// Shared factorization loop; returns the first non-positive pivot column or
// -1 on success. `l` receives the lower factor.
int cholesky_inplace(const Matrix& a, Matrix& l, double pivot_floor) {
    const std::size_t n = a.rows();
    l = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j) - simd::dot(l.row(j), l.row(j), j);
        if (!(d > pivot_floor)) return static_cast<int>(j);
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        const double inv = 1.0 / ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            l(i, j) = (a(i, j) - simd::dot(l.row(i), l.row(j), j)) * inv;
        }
    }
    return -1;
}

}  // namespace

Cholesky Cholesky::factor(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    Cholesky c;
    const int bad = cholesky_inplace(a, c.l_, 0.0);
    if (bad >= 0) {
        throw NumericalError("cholesky: non-positive pivot at column " + std::to_string(bad));
    }
    return c;
}

CholeskyTry try_cholesky(const Matrix& a, double rel_pivot_tol) {
    CholeskyTry r;
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    double max_diag = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    const int bad = cholesky_inplace(a, r.chol.l_, rel_pivot_tol * max_diag);
    r.ok = bad < 0;
    r.bad_pivot = bad;
    return r;
}

double Cholesky::logdet() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < l_.rows(); ++i) acc += std::log(l_(i, i));
    return 2.0 * acc;
}

Vec Cholesky::solve(Vec b) const {
    const std::size_t n = l_.rows();
    if (b.size() != n) throw std::invalid_argument("cholesky solve: length mismatch");
    // L y = b
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = (b[i] - simd::dot(l_.row(i), b.data(), i)) / l_(i, i);
    }
    // Lᵀ x = y, processed in axpy form over contiguous row prefixes.
    for (std::size_t i = n; i-- > 0;) {
        b[i] /= l_(i, i);
        simd::axpy(-b[i], l_.row(i), b.data(), i);
    }
    return b;
}

Matrix Cholesky::solve(Matrix b) const {
    const std::size_t n = l_.rows();
    if (b.rows() != n) throw std::invalid_argument("cholesky solve: row mismatch");
    const std::size_t m = b.cols();
    // Forward then backward substitution, vectorized across all right-hand
    // sides simultaneously (rows of b are contiguous).
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) simd::axpy(-l_(i, k), b.row(k), b.row(i), m);
        simd::scal(1.0 / l_(i, i), b.row(i), m);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) simd::axpy(-l_(k, i), b.row(k), b.row(i), m);
        simd::scal(1.0 / l_(i, i), b.row(i), m);
    }
    return b;
}

SymEigen sym_eigen(Matrix a, bool want_vectors) {
    if (a.rows() != a.cols()) throw std::invalid_argument("sym_eigen: matrix not square");
    const std::size_t n = a.rows();
    Matrix v = want_vectors ? Matrix::identity(n) : Matrix();
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        double diag = 0.0;
        for (std::size_t p = 0; p < n; ++p) diag += a(p, p) * a(p, p);
        if (off <= 1e-30 * std::max(diag, 1e-300)) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                if (want_vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    SymEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return out.values[x] < out.values[y]; });
    Vec sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = out.values[order[i]];
    out.values = std::move(sorted);
    if (want_vectors) {
        out.vectors = Matrix(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

double sym_condition(const Matrix& a) {
    const SymEigen eig = sym_eigen(a);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double v : eig.values) {
        const double m = std::abs(v);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    if (hi == 0.0) return std::numeric_limits<double>::infinity();
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

}  // namespace eivid
