#pragma once

#include <functional>
#include <variant>

#include "latflow/norms.hpp"

namespace latflow {

// Target window W in R^m x R_{>0}.  Either the projection of the positive
// half of the unit outer-norm ball onto the last m+1 coordinates, or an
// explicit box.  For the euclidean and sup outer norms the projected ball
// has the closed form { (y'', y_n) : y_n > 0, |(0, y'', y_n)| <= 1 }.
struct Window {
    struct ProjectedBall {
        NormTag outer = NormTag::euclidean;
    };
    struct Box {
        Vec lo, hi;  // m+1 entries; lo.back() >= 0 (0 acts as an open bound)
    };

    SplitDims dims;
    std::variant<ProjectedBall, Box> shape;

    static Window projected_ball(const SplitDims& d, NormTag outer) {
        return Window{d, ProjectedBall{outer}};
    }
    static Window box(const SplitDims& d, Vec lo, Vec hi) {
        if (static_cast<int>(lo.size()) != d.m + 1 || static_cast<int>(hi.size()) != d.m + 1)
            throw std::invalid_argument("Window::box: need m+1 bounds");
        if (lo[d.m] < 0.0) throw std::invalid_argument("Window::box: last coordinate must stay positive");
        for (int i = 0; i <= d.m; ++i)
            if (!(hi[i] > lo[i]) && !(i == d.m && hi[i] > 0.0))
                throw std::invalid_argument("Window::box: empty side");
        return Window{d, Box{std::move(lo), std::move(hi)}};
    }

    bool contains(const Vec& w) const {
        const int m = dims.m;
        if (!(w[m] > 0.0)) return false;
        if (const auto* pb = std::get_if<ProjectedBall>(&shape)) {
            if (pb->outer == NormTag::euclidean) {
                double s = 0.0;
                for (int i = 0; i <= m; ++i) s += w[i] * w[i];
                return s <= 1.0 + 1e-12;
            }
            for (int i = 0; i <= m; ++i)
                if (std::fabs(w[i]) > 1.0 + 1e-12) return false;
            return true;
        }
        const auto& b = std::get<Box>(shape);
        for (int i = 0; i <= m; ++i) {
            const double tol = 1e-12 * (1.0 + std::fabs(b.lo[i]) + std::fabs(b.hi[i]));
            if (w[i] < b.lo[i] - tol || w[i] > b.hi[i] + tol) return false;
        }
        return true;
    }

    // bounding box over R^{m+1} (the last side starts at 0)
    void bounding_box(Vec& lo, Vec& hi) const {
        const int m = dims.m;
        lo.assign(m + 1, 0.0);
        hi.assign(m + 1, 0.0);
        if (std::holds_alternative<ProjectedBall>(shape)) {
            for (int i = 0; i < m; ++i) {
                lo[i] = -1.0;
                hi[i] = 1.0;
            }
            lo[m] = 0.0;
            hi[m] = 1.0;
        } else {
            const auto& b = std::get<Box>(shape);
            lo = b.lo;
            hi = b.hi;
            lo[m] = std::max(lo[m], 0.0);
        }
    }

    double w_max() const {
        if (std::holds_alternative<ProjectedBall>(shape)) return 1.0;
        return std::get<Box>(shape).hi[dims.m];
    }

    // integral of y_n^k over W.  Closed form for boxes and for the sup
    // projected ball; 1-d adaptive quadrature over the slice volume profile
    // for the euclidean projected ball.
    double moment(int k, double rel_tol = 1e-9) const;
};

namespace detail {

// adaptive Simpson on [a, b]
inline double adapt_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adapt_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

inline double unit_ball_volume(int d, NormTag tag) {
    if (d == 0) return 1.0;
    if (tag == NormTag::sup) return std::pow(2.0, d);
    return std::pow(std::acos(-1.0), d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

}  // namespace detail

inline double Window::moment(int k, double rel_tol) const {
    const int m = dims.m;
    if (const auto* b = std::get_if<Box>(&shape)) {
        double side = 1.0;
        for (int i = 0; i < m; ++i) side *= b->hi[i] - b->lo[i];
        const double lo_n = std::max(b->lo[m], 0.0), hi_n = b->hi[m];
        return side * (std::pow(hi_n, k + 1) - std::pow(lo_n, k + 1)) / (k + 1);
    }
    const auto& pb = std::get<ProjectedBall>(shape);
    if (pb.outer == NormTag::sup) return std::pow(2.0, m) / (k + 1);
    const double vm = detail::unit_ball_volume(m, NormTag::euclidean);
    auto slice = [&](double y) { return std::pow(y, k) * vm * std::pow(std::max(1.0 - y * y, 0.0), m / 2.0); };
    return detail::integrate(slice, 0.0, 1.0, rel_tol / (k + 2.0));
}

}  // namespace latflow
