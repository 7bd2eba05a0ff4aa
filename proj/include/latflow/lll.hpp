#pragma once

#include <cstdint>
#include <vector>

#include "latflow/lattice.hpp"

namespace latflow {

struct IntMatrix {
    int n = 0;
    std::vector<long long> a;

    explicit IntMatrix(int n_ = 0) : n(n_), a(static_cast<size_t>(n_) * n_, 0) {}
    static IntMatrix identity(int n_) {
        IntMatrix m(n_);
        for (int i = 0; i < n_; ++i) m(i, i) = 1;
        return m;
    }
    long long& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    long long operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    SquareMatrix to_real() const {
        SquareMatrix m(n);
        for (size_t i = 0; i < a.size(); ++i) m.a[i] = static_cast<double>(a[i]);
        return m;
    }
};

// r = c * T (integer row vector times integer matrix)
inline IntVector int_row_times(const IntVector& c, const IntMatrix& t) {
    IntVector r(t.n, 0);
    for (int i = 0; i < t.n; ++i) {
        const long long ci = c[i];
        if (ci == 0) continue;
        for (int j = 0; j < t.n; ++j) r[j] += ci * t(i, j);
    }
    return r;
}

struct LLLResult {
    SquareMatrix basis;   // reduced basis, rows
    IntMatrix transform;  // T with T * old = reduced, det +-1
};

namespace detail {

struct GramSchmidt {
    int n;
    std::vector<double> mu;     // mu[i*n+j], j < i
    std::vector<double> bstar2; // squared lengths of b*_i

    explicit GramSchmidt(const SquareMatrix& b)
        : n(b.n), mu(static_cast<size_t>(b.n) * b.n, 0.0), bstar2(b.n, 0.0) {
        std::vector<double> bs(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) bs[static_cast<size_t>(i) * n + j] = b(i, j);
            for (int j = 0; j < i; ++j) {
                double dot = 0.0;
                for (int l = 0; l < n; ++l) dot += b(i, l) * bs[static_cast<size_t>(j) * n + l];
                const double m = bstar2[j] > 0.0 ? dot / bstar2[j] : 0.0;
                mu[static_cast<size_t>(i) * n + j] = m;
                for (int l = 0; l < n; ++l) bs[static_cast<size_t>(i) * n + l] -= m * bs[static_cast<size_t>(j) * n + l];
            }
            double s = 0.0;
            for (int l = 0; l < n; ++l) s += bs[static_cast<size_t>(i) * n + l] * bs[static_cast<size_t>(i) * n + l];
            bstar2[i] = s;
        }
    }
};

}  // namespace detail

// Plain floating-point LLL with delta = 0.99 by default.  Good enough for
// the small dimensions (n <= 6) handled here; the transform is tracked in
// exact integers.  Recomputes Gram-Schmidt after every change, which keeps
// the numerics simple and is cheap at these sizes.
inline LLLResult lll_reduce_matrix(const SquareMatrix& b0, double delta = 0.99) {
    if (std::fabs(determinant(b0)) < 1e-300)
        throw std::domain_error("lll_reduce: degenerate basis");
    const int n = b0.n;
    SquareMatrix b = b0;
    IntMatrix t = IntMatrix::identity(n);

    // Size-reduce row i against rows j < i, keeping the mu row of i current
    // as reductions are applied (reducing by b_j changes mu_{i,l} for l <= j).
    auto size_reduce_row = [&](int i, const detail::GramSchmidt& gs) {
        Vec mu_i(gs.mu.begin() + static_cast<long>(i) * n, gs.mu.begin() + static_cast<long>(i) * n + i);
        bool changed = false;
        for (int j = i - 1; j >= 0; --j) {
            const long long q = std::llround(mu_i[j]);
            if (q == 0) continue;
            for (int l = 0; l < n; ++l) b(i, l) -= static_cast<double>(q) * b(j, l);
            for (int l = 0; l < n; ++l) t(i, l) -= q * t(j, l);
            for (int l = 0; l < j; ++l) mu_i[l] -= static_cast<double>(q) * gs.mu[static_cast<size_t>(j) * n + l];
            mu_i[j] -= static_cast<double>(q);
            changed = true;
        }
        return changed;
    };

    int iter = 0;
    int kk = 1;
    while (kk < n) {
        if (++iter > 1000000) throw std::runtime_error("lll_reduce: iteration cap hit");
        detail::GramSchmidt gs(b);
        if (size_reduce_row(kk, gs)) gs = detail::GramSchmidt(b);
        const double mu = gs.mu[static_cast<size_t>(kk) * n + kk - 1];
        if (gs.bstar2[kk] >= (delta - mu * mu) * gs.bstar2[kk - 1]) {
            ++kk;
        } else {
            for (int l = 0; l < n; ++l) std::swap(b(kk, l), b(kk - 1, l));
            for (int l = 0; l < n; ++l) std::swap(t(kk, l), t(kk - 1, l));
            kk = std::max(kk - 1, 1);
        }
    }
    for (int i = 1; i < n; ++i) {
        detail::GramSchmidt gs(b);
        size_reduce_row(i, gs);
    }
    return LLLResult{std::move(b), std::move(t)};
}

inline std::pair<Lattice, IntMatrix> lll_reduce(const Lattice& x, double delta = 0.99) {
    if (std::fabs(determinant(x.basis)) < detail::kDegenerate)
        throw std::domain_error("lll_reduce: degenerate basis");
    LLLResult r = lll_reduce_matrix(x.basis, delta);
    return {Lattice{x.dims, std::move(r.basis)}, std::move(r.transform)};
}

}  // namespace latflow
