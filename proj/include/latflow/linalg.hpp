#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace latflow {

using Vec = std::vector<double>;
using IntVector = std::vector<long long>;

// Block split (k, m, n) with n = k + m + 1.  The first k coordinates are the
// sheared block, the middle m coordinates are inert, the last coordinate is
// the scaling one.
struct SplitDims {
    int n = 2;
    int k = 1;
    int m = 0;

    SplitDims() = default;
    SplitDims(int n_, int k_) : n(n_), k(k_), m(n_ - k_ - 1) { validate(); }
    SplitDims(int n_, int k_, int m_) : n(n_), k(k_), m(m_) { validate(); }

    void validate() const {
        if (n < 2 || k < 1 || m < 0 || n != k + m + 1)
            throw std::invalid_argument("SplitDims: need n >= 2, k >= 1, m >= 0, n = k+m+1");
    }
    bool operator==(const SplitDims&) const = default;
};

// Dense n x n real matrix, row-major.  Vectors are rows and act on the right
// (v -> v*g), so row i of a basis matrix is the i-th basis vector.
struct SquareMatrix {
    int n = 0;
    std::vector<double> a;  // n*n entries

    SquareMatrix() = default;
    explicit SquareMatrix(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0.0) {}

    static SquareMatrix identity(int n_) {
        SquareMatrix m(n_);
        for (int i = 0; i < n_; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    Vec row(int i) const { return Vec(a.begin() + static_cast<long>(i) * n, a.begin() + static_cast<long>(i + 1) * n); }
    void set_row(int i, const Vec& v) { std::copy(v.begin(), v.end(), a.begin() + static_cast<long>(i) * n); }

    bool finite() const {
        return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
    }
};

inline SquareMatrix operator*(const SquareMatrix& x, const SquareMatrix& y) {
    if (x.n != y.n) throw std::invalid_argument("matrix product: dimension mismatch");
    SquareMatrix r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int l = 0; l < x.n; ++l) {
            const double xi = x(i, l);
            if (xi == 0.0) continue;
            for (int j = 0; j < x.n; ++j) r(i, j) += xi * y(l, j);
        }
    return r;
}

// v * M for a row vector v.
inline Vec row_times(const Vec& v, const SquareMatrix& m) {
    if (static_cast<int>(v.size()) != m.n) throw std::invalid_argument("row_times: dimension mismatch");
    Vec r(m.n, 0.0);
    for (int i = 0; i < m.n; ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        for (int j = 0; j < m.n; ++j) r[j] += vi * m(i, j);
    }
    return r;
}

inline Vec row_times(const IntVector& c, const SquareMatrix& m) {
    Vec v(c.begin(), c.end());
    return row_times(v, m);
}

inline double determinant(SquareMatrix m) {
    double det = 1.0;
    for (int col = 0; col < m.n; ++col) {
        int piv = col;
        for (int r = col + 1; r < m.n; ++r)
            if (std::fabs(m(r, col)) > std::fabs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < m.n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (int r = col + 1; r < m.n; ++r) {
            const double f = m(r, col) / m(col, col);
            for (int j = col; j < m.n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

inline SquareMatrix inverse(const SquareMatrix& src) {
    SquareMatrix m = src;
    SquareMatrix inv = SquareMatrix::identity(m.n);
    for (int col = 0; col < m.n; ++col) {
        int piv = col;
        for (int r = col + 1; r < m.n; ++r)
            if (std::fabs(m(r, col)) > std::fabs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) throw std::domain_error("inverse: singular matrix");
        if (piv != col)
            for (int j = 0; j < m.n; ++j) {
                std::swap(m(piv, j), m(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const double d = m(col, col);
        for (int j = 0; j < m.n; ++j) {
            m(col, j) /= d;
            inv(col, j) /= d;
        }
        for (int r = 0; r < m.n; ++r) {
            if (r == col) continue;
            const double f = m(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < m.n; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

inline double max_abs_diff(const SquareMatrix& x, const SquareMatrix& y) {
    double d = 0.0;
    for (size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::fabs(x.a[i] - y.a[i]));
    return d;
}

inline double max_abs_diff(const Vec& x, const Vec& y) {
    double d = 0.0;
    for (size_t i = 0; i < x.size(); ++i) d = std::max(d, std::fabs(x[i] - y[i]));
    return d;
}

inline long long gcd_all(const IntVector& c) {
    long long g = 0;
    for (long long x : c) g = std::gcd(g, std::llabs(x));
    return g;
}

inline bool is_primitive(const IntVector& c) { return gcd_all(c) == 1; }

// Canonical sign: first nonzero coordinate positive.  Used for deterministic
// witness reporting (v and -v represent the same lattice direction).
inline IntVector canonical_sign(IntVector c) {
    for (long long x : c) {
        if (x > 0) break;
        if (x < 0) {
            for (auto& y : c) y = -y;
            break;
        }
    }
    return c;
}

}  // namespace latflow
