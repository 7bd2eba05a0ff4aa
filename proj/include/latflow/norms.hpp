#pragma once

#include <cmath>
#include <optional>

#include "latflow/linalg.hpp"

namespace latflow {

enum class NormTag { euclidean, sup };

inline double norm_of(const Vec& v, NormTag tag) {
    double r = 0.0;
    if (tag == NormTag::euclidean) {
        for (double x : v) r += x * x;
        return std::sqrt(r);
    }
    for (double x : v) r = std::max(r, std::fabs(x));
    return r;
}

inline double norm_of(const double* v, int len, NormTag tag) {
    double r = 0.0;
    if (tag == NormTag::euclidean) {
        for (int i = 0; i < len; ++i) r += v[i] * v[i];
        return std::sqrt(r);
    }
    for (int i = 0; i < len; ++i) r = std::max(r, std::fabs(v[i]));
    return r;
}

// Pair of norms: the ambient norm on R^n (optionally conjugated, so that
// |v|_g0 = |v * g0^-1|) and the time norm on R^k.
struct NormPair {
    NormTag outer = NormTag::euclidean;
    NormTag inner = NormTag::euclidean;
    std::optional<SquareMatrix> conjugator;       // g0, det 1
    std::optional<SquareMatrix> conjugator_inv;   // cached g0^-1

    NormPair() = default;
    NormPair(NormTag o, NormTag i) : outer(o), inner(i) {}
    NormPair(NormTag o, NormTag i, const SquareMatrix& g0) : outer(o), inner(i) {
        set_conjugator(g0);
    }

    void set_conjugator(const SquareMatrix& g0) {
        if (std::fabs(std::fabs(determinant(g0)) - 1.0) > 1e-9)
            throw std::invalid_argument("NormPair: conjugator must be unimodular");
        conjugator = g0;
        conjugator_inv = inverse(g0);
    }

    double outer_norm(const Vec& v) const {
        if (conjugator_inv) return norm_of(row_times(v, *conjugator_inv), outer);
        return norm_of(v, outer);
    }
    double inner_norm(const Vec& s) const { return norm_of(s, inner); }
};

// --- clipped minimizers ------------------------------------------------
//
// Building blocks for minimizing |c - s| style expressions over a norm ball
// |s| <= T.  Exact up to floating point (the euclidean-ball / sup-value
// case is solved by bisection on a monotone feasibility test).

// min_{|s|_2 <= T} |c - s|_inf.  Smallest t >= 0 such that the cube of
// half-width t around c meets the euclidean ball of radius T, i.e.
// sum_i max(|c_i| - t, 0)^2 <= T^2.  Monotone in t, solved by bisection.
inline double min_sup_residual_in_l2_ball(const Vec& c, double T) {
    double s2 = 0.0, amax = 0.0;
    for (double x : c) {
        s2 += x * x;
        amax = std::max(amax, std::fabs(x));
    }
    if (s2 <= T * T) return 0.0;
    auto excess = [&](double t) {
        double g = 0.0;
        for (double x : c) {
            const double d = std::max(std::fabs(x) - t, 0.0);
            g += d * d;
        }
        return g;
    };
    double lo = 0.0, hi = amax;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > T * T)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

// Argmin s for the euclidean-ball / sup-value problem above: shave every
// coordinate down to the optimal residual level t.
inline Vec argmin_sup_residual_in_l2_ball(const Vec& c, double T) {
    const double t = min_sup_residual_in_l2_ball(c, T);
    Vec s(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
        const double mag = std::max(std::fabs(c[i]) - t, 0.0);
        s[i] = std::copysign(mag, c[i]);
    }
    return s;
}

// Distance from the origin to the box prod_i [lo_i, hi_i], per coordinate.
inline double dist_to_interval(double lo, double hi) {
    if (lo > 0.0) return lo;
    if (hi < 0.0) return -hi;
    return 0.0;
}

inline double min_norm_in_box(const Vec& lo, const Vec& hi, NormTag tag) {
    Vec d(lo.size());
    for (size_t i = 0; i < lo.size(); ++i) d[i] = dist_to_interval(lo[i], hi[i]);
    return norm_of(d, tag);
}

// min |s| (inner norm) over the euclidean ball of radius r around c.
inline double min_norm_in_l2_ball(const Vec& c, double r, NormTag inner) {
    if (inner == NormTag::euclidean) return std::max(0.0, norm_of(c, NormTag::euclidean) - r);
    return min_sup_residual_in_l2_ball(c, r);
}

}  // namespace latflow
