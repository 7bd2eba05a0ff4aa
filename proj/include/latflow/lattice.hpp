#pragma once

#include <cmath>

#include "latflow/linalg.hpp"

namespace latflow {

// Unimodular lattice Z^n * basis.  Rows of `basis` are the basis vectors.
// The determinant is kept at 1 up to 1e-9; drift beyond 1e-12 is repaired by
// rescaling with det^{1/n}.
struct Lattice {
    SplitDims dims;
    SquareMatrix basis;

    int n() const { return dims.n; }
};

namespace detail {
constexpr double kDetDrift = 1e-12;
constexpr double kDetTol = 1e-9;
constexpr double kDegenerate = 1e-6;
}  // namespace detail

inline void renormalize(Lattice& x) {
    double det = determinant(x.basis);
    if (std::fabs(det) < detail::kDegenerate)
        throw std::domain_error("Lattice: degenerate basis (|det| < 1e-6)");
    if (det < 0.0) {
        // v and -v span the same lattice; flip one row to land in SL.
        for (int j = 0; j < x.basis.n; ++j) x.basis(0, j) = -x.basis(0, j);
        det = -det;
    }
    if (std::fabs(det - 1.0) > detail::kDetDrift) {
        const double f = std::pow(det, -1.0 / x.n());
        for (auto& v : x.basis.a) v *= f;
    }
}

inline Lattice make_lattice(const SplitDims& dims, SquareMatrix basis) {
    dims.validate();
    if (basis.n != dims.n) throw std::invalid_argument("make_lattice: basis dimension mismatch");
    if (!basis.finite()) throw std::invalid_argument("make_lattice: non-finite basis");
    Lattice x{dims, std::move(basis)};
    renormalize(x);
    return x;
}

inline Lattice integer_lattice(const SplitDims& dims) {
    return Lattice{dims, SquareMatrix::identity(dims.n)};
}

// --- group elements ----------------------------------------------------

// U(s): lower block unipotent.  On rows v = (v', v'', v_n) the right action
// is v -> (v' - s v_n, v'', v_n).
inline SquareMatrix shear_matrix(const SplitDims& d, const Vec& s) {
    if (static_cast<int>(s.size()) != d.k) throw std::invalid_argument("shear_matrix: |s| != k");
    SquareMatrix u = SquareMatrix::identity(d.n);
    for (int i = 0; i < d.k; ++i) u(d.n - 1, i) = -s[i];
    return u;
}

// Phi(t): diag(e^{(m+1)t} on the first k coordinates, e^{-kt} on the rest).
inline SquareMatrix diag_flow_matrix(const SplitDims& d, double t) {
    const double eu = (d.m + 1) * t, ed = -static_cast<double>(d.k) * t;
    if (std::fabs(eu) > 700.0 || std::fabs(ed) > 700.0)
        throw std::range_error("diag_flow_matrix: exp overflow, |t| too large");
    SquareMatrix g(d.n);
    for (int i = 0; i < d.k; ++i) g(i, i) = std::exp(eu);
    for (int i = d.k; i < d.n; ++i) g(i, i) = std::exp(ed);
    return g;
}

// V(B): upper block unipotent with B a k x (m+1) block, row-major.
inline SquareMatrix horospherical_matrix(const SplitDims& d, const Vec& b) {
    if (static_cast<int>(b.size()) != d.k * (d.m + 1))
        throw std::invalid_argument("horospherical_matrix: block size != k*(m+1)");
    SquareMatrix g = SquareMatrix::identity(d.n);
    for (int i = 0; i < d.k; ++i)
        for (int j = 0; j <= d.m; ++j) g(i, d.k + j) = b[static_cast<size_t>(i) * (d.m + 1) + j];
    return g;
}

// R(w) for w = (w', w_{m+1}) in R^m x R_{>0}; section transversal direction.
inline SquareMatrix section_matrix(const SplitDims& d, const Vec& w) {
    if (static_cast<int>(w.size()) != d.m + 1)
        throw std::invalid_argument("section_matrix: |w| != m+1");
    const double wn = w[d.m];
    if (!(wn > 0.0)) throw std::invalid_argument("section_matrix: last coordinate must be > 0");
    SquareMatrix g(d.n);
    const double top = std::pow(wn, -static_cast<double>(d.m + 1) / d.k);
    for (int i = 0; i < d.k; ++i) g(i, i) = top;
    for (int j = 0; j < d.m; ++j) g(d.k + j, d.k + j) = wn;
    for (int j = 0; j < d.m; ++j) g(d.n - 1, d.k + j) = w[j];
    g(d.n - 1, d.n - 1) = wn;
    return g;
}

// --- actions ------------------------------------------------------------

inline Lattice unipotent_apply(const Lattice& x, const Vec& s) {
    if (static_cast<int>(s.size()) != x.dims.k)
        throw std::invalid_argument("unipotent_apply: |s| != k");
    for (double v : s)
        if (!std::isfinite(v)) throw std::invalid_argument("unipotent_apply: non-finite s");
    Lattice y = x;
    const int n = x.n(), k = x.dims.k;
    // column update: col_j -= s_j * col_{n-1} for j < k
    for (int i = 0; i < n; ++i) {
        const double vn = y.basis(i, n - 1);
        for (int j = 0; j < k; ++j) y.basis(i, j) -= s[j] * vn;
    }
    renormalize(y);
    return y;
}

inline Lattice diagonal_apply(const Lattice& x, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("diagonal_apply: non-finite t");
    const SquareMatrix g = diag_flow_matrix(x.dims, t);
    Lattice y = x;
    for (int i = 0; i < x.n(); ++i)
        for (int j = 0; j < x.n(); ++j) y.basis(i, j) *= g(j, j);
    renormalize(y);
    return y;
}

inline Lattice right_multiply(const Lattice& x, const SquareMatrix& g) {
    Lattice y{x.dims, x.basis * g};
    renormalize(y);
    return y;
}

}  // namespace latflow
