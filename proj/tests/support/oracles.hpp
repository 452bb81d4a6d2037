#pragma once

// Independent reference implementations used as test oracles. Everything
// here is deliberately naive (Gaussian elimination, triple-loop products,
// explicit Kronecker blocks, derivative-free searches) and shares no code
// path with the library beyond the container types.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "eivid/linalg.hpp"

namespace oracle {

using eivid::Matrix;
using eivid::Vec;

// Gaussian elimination with partial pivoting.
inline Vec ge_solve(Matrix a, Vec b) {
    const int n = static_cast<int>(a.rows());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        }
        if (a(piv, col) == 0.0) throw std::runtime_error("ge_solve: singular");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
            std::swap(b[col], b[piv]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
        x[r] = acc / a(r, r);
    }
    return x;
}

inline Matrix ge_solve_matrix(const Matrix& a, const Matrix& b) {
    Matrix x(b.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        Vec col(b.rows());
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        const Vec sol = ge_solve(a, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

inline Matrix ge_inverse(const Matrix& a) {
    return ge_solve_matrix(a, Matrix::identity(a.rows()));
}

// log|det| via elimination pivots; throws if det <= 0.
inline double ge_logdet_positive(Matrix a) {
    const int n = static_cast<int>(a.rows());
    double sign = 1.0, acc = 0.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        }
        if (a(piv, col) == 0.0) throw std::runtime_error("ge_logdet: singular");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
            sign = -sign;
        }
        if (a(col, col) < 0.0) sign = -sign;
        acc += std::log(std::abs(a(col, col)));
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    if (sign < 0.0) throw std::runtime_error("ge_logdet: negative determinant");
    return acc;
}

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    return c;
}

inline Vec naive_matvec(const Matrix& a, const Vec& x) {
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) y[i] += a(i, k) * x[k];
    return y;
}

inline Matrix naive_transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q) {
                    c(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
                }
    return c;
}

// Dense multivariate normal log density.
inline double mvn_logpdf(const Vec& x, const Vec& mean, const Matrix& cov) {
    const int n = static_cast<int>(x.size());
    if (n == 0) return 0.0;
    Vec d(n);
    for (int i = 0; i < n; ++i) d[i] = x[i] - mean[i];
    const Vec sol = ge_solve(cov, d);
    double quad = 0.0;
    for (int i = 0; i < n; ++i) quad += d[i] * sol[i];
    const double log2pi = std::log(2.0 * 3.141592653589793238462643383279502884);
    return -0.5 * (n * log2pi + ge_logdet_positive(cov) + quad);
}

// v_t = sum_k g_k w_{t-k+1} (1-based), the direct double loop.
inline Vec naive_convolve(const Vec& w, const Vec& g) {
    const int n_total = static_cast<int>(w.size());
    const int taps = static_cast<int>(g.size());
    Vec v(n_total, 0.0);
    for (int t = 1; t <= n_total; ++t) {
        for (int k = 1; k <= taps && k <= t; ++k) v[t - 1] += g[k - 1] * w[t - k];
    }
    return v;
}

// Golden-section maximizer on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
    const double ratio = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Derivative-free coordinate-ascent maximizer (enough for smooth strictly
// concave objectives on a handful of coordinates).
inline Vec coord_ascent_max(const std::function<double(const Vec&)>& f, Vec x, int sweeps = 120) {
    for (int s = 0; s < sweeps; ++s) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double span = 4.0 * (1.0 + std::abs(x[i])) / (1.0 + 0.5 * s);
            Vec probe = x;
            const double best = golden_max(
                [&](double xi) {
                    probe[i] = xi;
                    return f(probe);
                },
                x[i] - span, x[i] + span, 80);
            x[i] = best;
        }
    }
    return x;
}

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }
    double normal(double mean = 0.0, double sd = 1.0) {
        return std::normal_distribution<double>(mean, sd)(engine);
    }
    int integer(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(engine);
    }
    Vec normal_vec(std::size_t n, double sd = 1.0) {
        Vec v(n);
        for (double& x : v) x = normal(0.0, sd);
        return v;
    }
    // Random symmetric positive definite matrix with unit-ish scale.
    Matrix spd(std::size_t n) {
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = normal();
        Matrix s = naive_matmul(a, naive_transpose(a));
        for (std::size_t i = 0; i < n; ++i) s(i, i) += 0.5 + n * 0.1;
        return s;
    }
    // Random strictly increasing subset of {1..N} with each element kept with
    // probability keep.
    std::vector<int> subset(int n_total, double keep) {
        std::vector<int> times;
        for (int t = 1; t <= n_total; ++t) {
            if (uniform() < keep) times.push_back(t);
        }
        return times;
    }
};

}  // namespace oracle
