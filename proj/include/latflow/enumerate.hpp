#pragma once

#include <functional>
#include <utility>

#include "latflow/lll.hpp"
#include "latflow/norms.hpp"

namespace latflow {

struct EnumerationCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Compact search region: axis-aligned bounding box plus an exact membership
// test.  Membership should use closed inequalities with ~1e-12 slack so that
// boundary points survive floating-point noise.
struct Region {
    Vec lo, hi;
    std::function<bool(const Vec&)> member;
};

inline Region ball_region(Vec center, double radius) {
    const size_t n = center.size();
    Vec lo(n), hi(n);
    for (size_t i = 0; i < n; ++i) {
        lo[i] = center[i] - radius;
        hi[i] = center[i] + radius;
    }
    const double r2 = radius * radius * (1.0 + 1e-12) + 1e-300;
    return Region{std::move(lo), std::move(hi),
                  [c = std::move(center), r2](const Vec& y) {
                      double s = 0.0;
                      for (size_t i = 0; i < c.size(); ++i) s += (y[i] - c[i]) * (y[i] - c[i]);
                      return s <= r2;
                  }};
}

inline Region box_region(Vec lo, Vec hi) {
    Vec l = lo, h = hi;
    return Region{std::move(lo), std::move(hi), [l, h](const Vec& y) {
                      for (size_t i = 0; i < l.size(); ++i) {
                          const double tol = 1e-12 * (1.0 + std::fabs(l[i]) + std::fabs(h[i]));
                          if (y[i] < l[i] - tol || y[i] > h[i] + tol) return false;
                      }
                      return true;
                  }};
}

struct LatticePoint {
    IntVector coeffs;  // integer coefficients w.r.t. the lattice basis rows
    Vec point;         // embedded point coeffs * basis
};

struct EnumOptions {
    long long node_cap = 10'000'000;       // enumeration tree nodes
    double predicted_cap = 50'000'000.0;   // refuse upfront if the volume heuristic predicts more
};

namespace detail {

// All integer rows d with |d * B - target|_2^2 <= r2.  B must be reasonably
// reduced.  Visits nodes depth-first with per-level interval bounds from the
// Gram-Schmidt decomposition; calls out(d) for every solution.
template <typename F>
inline void fincke_pohst(const SquareMatrix& b, const Vec& target, double r2, long long node_cap,
                         long long& nodes, F&& out) {
    const int n = b.n;
    GramSchmidt gs(b);
    // target coordinates in the b* frame
    Vec tau(n, 0.0);
    {
        std::vector<double> bs(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) bs[static_cast<size_t>(i) * n + j] = b(i, j);
            for (int j = 0; j < i; ++j) {
                const double m = gs.mu[static_cast<size_t>(i) * n + j];
                for (int l = 0; l < n; ++l) bs[static_cast<size_t>(i) * n + l] -= m * bs[static_cast<size_t>(j) * n + l];
            }
        }
        for (int i = 0; i < n; ++i) {
            if (gs.bstar2[i] <= 0.0) throw std::domain_error("enumerate: degenerate basis");
            double dot = 0.0;
            for (int l = 0; l < n; ++l) dot += target[l] * bs[static_cast<size_t>(i) * n + l];
            tau[i] = dot / gs.bstar2[i];
        }
    }

    std::vector<long long> d(n, 0);
    const double slack = 1e-9 * (1.0 + r2);
    const double bound = r2 + slack;

    // depth-first over levels n-1 .. 0; acc carries the squared distance
    // contributed by the levels already fixed
    auto rec = [&](auto&& self, int i, double acc) -> void {
        if (i < 0) {
            out(d);
            return;
        }
        double center = tau[i];
        for (int l = i + 1; l < n; ++l)
            center -= static_cast<double>(d[l]) * gs.mu[static_cast<size_t>(l) * n + i];
        const double budget = bound - acc;
        if (budget < 0.0) return;
        const double rad = std::sqrt(budget / gs.bstar2[i]) + 1e-12;
        const long long clo = static_cast<long long>(std::ceil(center - rad));
        const long long chi = static_cast<long long>(std::floor(center + rad));
        for (long long c = clo; c <= chi; ++c) {
            if (++nodes > node_cap) throw EnumerationCapError("enumerate: node cap exceeded");
            d[i] = c;
            const double dev = static_cast<double>(c) - center;
            const double a2 = acc + dev * dev * gs.bstar2[i];
            if (a2 <= bound) self(self, i - 1, a2);
        }
        d[i] = 0;
    };
    rec(rec, n - 1, 0.0);
}

}  // namespace detail

// All integer coefficient rows c (excluding 0) with c * basis inside the
// region; primitive_only keeps gcd(c) = 1.  Complete up to floating-point
// slack: the box is rescaled to a unit cube, the scaled basis is LLL-reduced
// and the circumscribed ball is enumerated, then the exact membership test
// filters.
inline std::vector<LatticePoint> enumerate_points(const Lattice& x, const Region& region,
                                                  bool primitive_only,
                                                  const EnumOptions& opt = {}) {
    const int n = x.n();
    if (static_cast<int>(region.lo.size()) != n || static_cast<int>(region.hi.size()) != n)
        throw std::invalid_argument("enumerate_points: region dimension mismatch");
    const double adet = std::fabs(determinant(x.basis));
    if (adet < 1e-12) throw std::domain_error("enumerate_points: degenerate basis");

    Vec center(n), halfw(n);
    for (int i = 0; i < n; ++i) {
        if (!(region.hi[i] >= region.lo[i]))
            throw std::invalid_argument("enumerate_points: empty bounding box");
        center[i] = 0.5 * (region.lo[i] + region.hi[i]);
        halfw[i] = std::max(0.5 * (region.hi[i] - region.lo[i]), 1e-9);
    }

    // volume heuristic: lattice points of the scaled lattice in the ball of
    // radius sqrt(n) around the scaled center
    double ball_vol = std::pow(std::acos(-1.0), n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    double predicted = ball_vol * std::pow(std::sqrt(static_cast<double>(n)), n) / adet;
    for (int i = 0; i < n; ++i) predicted *= halfw[i];
    if (predicted > opt.predicted_cap)
        throw EnumerationCapError("enumerate_points: predicted count exceeds cap");

    SquareMatrix scaled = x.basis;
    Vec tgt(n);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < n; ++r) scaled(r, i) /= halfw[i];
        tgt[i] = center[i] / halfw[i];
    }
    LLLResult red = lll_reduce_matrix(scaled);

    std::vector<LatticePoint> out;
    long long nodes = 0;
    const double r2 = static_cast<double>(n) * (1.0 + 1e-9);
    detail::fincke_pohst(red.basis, tgt, r2, opt.node_cap, nodes, [&](const std::vector<long long>& d) {
        IntVector c = int_row_times(d, red.transform);
        if (gcd_all(c) == 0) return;  // the zero vector
        if (primitive_only && !is_primitive(c)) return;
        Vec y = row_times(c, x.basis);
        bool in_box = true;
        for (int i = 0; i < n; ++i) {
            const double tol = 1e-9 * (1.0 + std::fabs(region.lo[i]) + std::fabs(region.hi[i]));
            if (y[i] < region.lo[i] - tol || y[i] > region.hi[i] + tol) {
                in_box = false;
                break;
            }
        }
        if (in_box && region.member(y)) out.push_back(LatticePoint{std::move(c), std::move(y)});
    });
    return out;
}

}  // namespace latflow
