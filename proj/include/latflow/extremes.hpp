#pragma once

#include <optional>

#include "latflow/alpha.hpp"
#include "latflow/sections.hpp"

namespace latflow {

// Symmetric cusp target C scaled by 1/L: either the outer-norm ball of the
// given radius or a box with per-coordinate halfwidths (C = -C either way).
struct CuspRegion {
    enum class Shape { ball, box };
    Shape shape = Shape::ball;
    double radius = 1.0;  // ball
    Vec halfwidths;       // box, n entries
    double L = 1.0;

    static CuspRegion ball(double L_, double radius_ = 1.0) {
        CuspRegion c;
        c.shape = Shape::ball;
        c.radius = radius_;
        c.L = L_;
        return c;
    }
    static CuspRegion box(double L_, Vec halfw) {
        CuspRegion c;
        c.shape = Shape::box;
        c.halfwidths = std::move(halfw);
        c.L = L_;
        return c;
    }
};

namespace detail {

struct ClipMin {
    double value;  // min_{|s| <= T} of the residual norm contribution
    Vec s;         // an argmin
};

// min_{|s| <= T} applied to the first-block residual (v' - s v_n), returned
// in the outer norm's aggregation together with an argmin s.
inline ClipMin clip_residual(const Vec& c, double avn, double T, NormTag outer, NormTag inner) {
    const int k = static_cast<int>(c.size());
    ClipMin r;
    r.s.assign(k, 0.0);
    if (inner == NormTag::sup) {
        // separable: clamp each coordinate
        Vec res(k);
        for (int i = 0; i < k; ++i) {
            r.s[i] = std::clamp(c[i], -T, T);
            res[i] = (c[i] - r.s[i]) * avn;
        }
        r.value = norm_of(res, outer);
        return r;
    }
    // inner euclidean ball
    if (outer == NormTag::euclidean) {
        const double nc = norm_of(c, NormTag::euclidean);
        if (nc <= T) {
            r.s = c;
            r.value = 0.0;
        } else {
            const double f = T / nc;
            for (int i = 0; i < k; ++i) r.s[i] = f * c[i];
            r.value = (nc - T) * avn;
        }
        return r;
    }
    r.s = argmin_sup_residual_in_l2_ball(c, T);
    r.value = min_sup_residual_in_l2_ball(c, T) * avn;
    return r;
}

// rho_T(v) = min_{|s| <= T} |v U(s)| in the plain outer norm.
inline ClipMin rho_clipped(const SplitDims& d, const Vec& v, double T, const NormPair& norms) {
    const int k = d.k, n = d.n;
    const double vn = v[n - 1];
    if (vn == 0.0) {
        ClipMin r;
        r.s.assign(k, 0.0);
        r.value = norm_of(v, norms.outer);
        return r;
    }
    Vec c(k);
    for (int i = 0; i < k; ++i) c[i] = v[i] / vn;
    ClipMin res = clip_residual(c, std::fabs(vn), T, norms.outer, norms.inner);
    if (norms.outer == NormTag::euclidean) {
        double rest = vn * vn;
        for (int j = k; j < n - 1; ++j) rest += v[j] * v[j];
        res.value = std::sqrt(res.value * res.value + rest);
    } else {
        double rest = std::fabs(vn);
        for (int j = k; j < n - 1; ++j) rest = std::max(rest, std::fabs(v[j]));
        res.value = std::max(res.value, rest);
    }
    return res;
}

// Conjugated variant: min_{|s| <= T} |(v - v_n (s,0,..,0)) g0inv|_2.
// Quadratic in s, solved exactly (secular bisection for the euclidean time
// ball, coordinate descent for the sup time box).  Euclidean ambient norm
// only; the sup ambient norm with a conjugator has no closed-form inner
// minimum and is rejected upstream.
inline ClipMin rho_clipped_conj(const SplitDims& d, const Vec& v, double T, const NormPair& norms) {
    const int k = d.k, n = d.n;
    const SquareMatrix& gi = *norms.conjugator_inv;
    const double vn = v[n - 1];
    Vec b = row_times(v, gi);
    ClipMin out;
    out.s.assign(k, 0.0);
    if (vn == 0.0) {
        out.value = norm_of(b, NormTag::euclidean);
        return out;
    }
    // A columns a_i = v_n * row_i(g0inv); gram G = A^T A, h = A^T b
    std::vector<Vec> a(k, Vec(n));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = vn * gi(i, j);
    SquareMatrix g(k);
    Vec h(k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double dot = 0.0;
            for (int l = 0; l < n; ++l) dot += a[i][l] * a[j][l];
            g(i, j) = dot;
        }
        for (int l = 0; l < n; ++l) h[i] += a[i][l] * b[l];
    }
    auto qvalue = [&](const Vec& s) {
        Vec res = b;
        for (int i = 0; i < k; ++i)
            for (int l = 0; l < n; ++l) res[l] -= s[i] * a[i][l];
        return norm_of(res, NormTag::euclidean);
    };
    if (norms.inner == NormTag::euclidean) {
        auto solve_shifted = [&](double lam) {
            SquareMatrix gs = g;
            for (int i = 0; i < k; ++i) gs(i, i) += lam;
            return row_times(h, inverse(gs));  // symmetric, so row solve works
        };
        Vec s = solve_shifted(0.0);
        if (norm_of(s, NormTag::euclidean) > T) {
            double lo = 0.0, hi = norm_of(h, NormTag::euclidean) / T + 1.0;
            for (int it = 0; it < 120; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (norm_of(solve_shifted(mid), NormTag::euclidean) > T)
                    lo = mid;
                else
                    hi = mid;
            }
            s = solve_shifted(hi);
            const double ns = norm_of(s, NormTag::euclidean);
            if (ns > T)
                for (auto& x : s) x *= T / ns;
        }
        out.s = s;
        out.value = qvalue(s);
        return out;
    }
    // sup time norm: box-constrained coordinate descent
    Vec s(k, 0.0);
    for (int sweep = 0; sweep < 400; ++sweep) {
        double delta = 0.0;
        for (int i = 0; i < k; ++i) {
            double num = h[i];
            for (int j = 0; j < k; ++j)
                if (j != i) num -= g(i, j) * s[j];
            const double cand = std::clamp(num / g(i, i), -T, T);
            delta = std::max(delta, std::fabs(cand - s[i]));
            s[i] = cand;
        }
        if (delta < 1e-14) break;
    }
    out.s = s;
    out.value = qvalue(s);
    return out;
}

inline ClipMin rho_T(const SplitDims& d, const Vec& v, double T, const NormPair& norms) {
    if (norms.conjugator_inv) return rho_clipped_conj(d, v, T, norms);
    return rho_clipped(d, v, T, norms);
}

// Candidate region for the sup search: every v with rho_T(v) <= rho lies in
// it.  col[j] bounds |z_j| over the rho-ball of the (possibly conjugated)
// outer norm.
inline Region sup_candidate_region(const SplitDims& d, double T, double rho,
                                   const NormPair& norms) {
    const int n = d.n, k = d.k;
    Vec col(n, rho);
    if (norms.conjugator) {
        const SquareMatrix& g0 = *norms.conjugator;
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += g0(i, j) * g0(i, j);
            col[j] = rho * std::sqrt(s);
        }
    }
    Vec lo(n), hi(n);
    for (int i = 0; i < k; ++i) hi[i] = T * col[n - 1] + col[i];
    for (int j = k; j < n; ++j) hi[j] = col[j];
    for (int i = 0; i < n; ++i) lo[i] = -hi[i];
    auto member = [d, T, col](const Vec& y) {
        const int nn = d.n;
        const double avn = std::fabs(y[nn - 1]);
        for (int j = d.k; j < nn; ++j) {
            const double tol = 1e-12 * (1.0 + col[j]);
            if (std::fabs(y[j]) > col[j] + tol) return false;
        }
        for (int i = 0; i < d.k; ++i)
            if (std::fabs(y[i]) > T * avn + col[i] + 1e-12 * (1.0 + col[i])) return false;
        return true;
    };
    return Region{std::move(lo), std::move(hi), member};
}

}  // namespace detail

struct SupLogAlpha {
    double M = 0.0;        // sup over |s| <= T of log alpha(h_s(x))
    double rho = 0.0;      // exp(-M), the clipped minimum norm
    IntVector witness;     // minimizing primitive vector (coefficients)
    Vec v;                 // embedded minimizing vector
    Vec s_at_min;          // an s attaining the sup
};

// Exact M_T(x) = sup_{|s| <= T} log alpha(h_s(x)) = -log min_v rho_T(v).
// The candidate search starts from min(lambda_1, 2 T^{-k/n}) and doubles the
// radius until a certified minimum is found: once some candidate achieves
// rho_T <= rho_cand, every potentially better vector was already inside the
// enumerated region.
inline SupLogAlpha sup_log_alpha(const Lattice& x, double T, const NormPair& norms,
                                 const EnumOptions& opt = {}) {
    if (!(T >= 0.0)) throw std::invalid_argument("sup_log_alpha: T must be >= 0");
    if (norms.conjugator && norms.outer == NormTag::sup)
        throw std::invalid_argument("sup_log_alpha: sup outer norm with conjugator unsupported");
    const SplitDims& d = x.dims;
    ShortestVector sv = shortest_vector(x, norms, opt);
    const double lambda1 = sv.norm;

    SupLogAlpha best;
    best.rho = lambda1;
    best.witness = sv.coeffs;
    best.v = sv.v;
    best.s_at_min.assign(d.k, 0.0);
    {
        detail::ClipMin cm = detail::rho_T(d, sv.v, T, norms);
        best.rho = cm.value;
        best.s_at_min = cm.s;
    }
    if (T > 0.0) {
        double rho_cand = std::min(lambda1, 2.0 * std::pow(std::max(T, 1.0), -static_cast<double>(d.k) / d.n));
        for (;;) {
            const double probe = std::min(rho_cand, lambda1) * (1.0 + 1e-9);
            Region region = detail::sup_candidate_region(d, T, probe, norms);
            auto pts = enumerate_points(x, region, true, opt);
            for (auto& p : pts) {
                detail::ClipMin cm = detail::rho_T(d, p.point, T, norms);
                if (cm.value < best.rho - 1e-15 ||
                    (std::fabs(cm.value - best.rho) <= 1e-15 && canonical_sign(p.coeffs) < canonical_sign(best.witness))) {
                    best.rho = cm.value;
                    best.witness = canonical_sign(p.coeffs);
                    best.v = row_times(best.witness, x.basis);
                    detail::ClipMin fix = detail::rho_T(d, best.v, T, norms);
                    best.s_at_min = fix.s;
                }
            }
            if (best.rho <= probe || rho_cand >= lambda1) break;
            rho_cand = std::min(2.0 * rho_cand, lambda1);
        }
    } else {
        best.witness = canonical_sign(best.witness);
        best.v = row_times(best.witness, x.basis);
    }
    best.M = -std::log(best.rho);
    return best;
}

// --- entry times ---------------------------------------------------------

struct EntryTime {
    std::optional<double> value;   // min |s| with h_s(x) in H(L^-1 C)
    double searched_bound = 0.0;   // certified hit-free |s| range when empty
    IntVector witness;
    bool censored() const { return !value.has_value(); }
};

namespace detail {

// Minimal |s| putting v U(s) inside L^-1 C; empty when no s works.
inline std::optional<double> entry_min_s(const SplitDims& d, Vec v, const CuspRegion& c,
                                         const NormPair& norms) {
    const int k = d.k, n = d.n;
    if (v[n - 1] < 0.0)
        for (auto& z : v) z = -z;  // C = -C
    const double vn = v[n - 1];
    if (vn == 0.0) return std::nullopt;  // handled by the upfront membership check
    if (c.shape == CuspRegion::Shape::ball && norms.outer == NormTag::euclidean) {
        const double r = c.radius / c.L;
        double rest = vn * vn;
        for (int j = k; j < n - 1; ++j) rest += v[j] * v[j];
        const double disc = r * r - rest;
        if (disc < 0.0) return std::nullopt;
        Vec cc(k);
        for (int i = 0; i < k; ++i) cc[i] = v[i] / vn;
        return min_norm_in_l2_ball(cc, std::sqrt(disc) / vn, norms.inner);
    }
    // box (or sup-ball, which is the box with equal halfwidths)
    Vec a(n);
    if (c.shape == CuspRegion::Shape::box) {
        if (static_cast<int>(c.halfwidths.size()) != n)
            throw std::invalid_argument("entry_min_s: box halfwidths size mismatch");
        for (int j = 0; j < n; ++j) a[j] = c.halfwidths[j] / c.L;
    } else {
        a.assign(n, c.radius / c.L);
    }
    for (int j = k; j < n; ++j)
        if (std::fabs(v[j]) > a[j] * (1.0 + 1e-12)) return std::nullopt;
    Vec lo(k), hi(k);
    for (int i = 0; i < k; ++i) {
        lo[i] = (v[i] - a[i]) / vn;
        hi[i] = (v[i] + a[i]) / vn;
    }
    return min_norm_in_box(lo, hi, norms.inner);
}

inline Region cusp_region(const SplitDims& d, const CuspRegion& c, const NormPair& norms) {
    const int n = d.n;
    if (c.shape == CuspRegion::Shape::ball && norms.outer == NormTag::euclidean)
        return ball_region(Vec(n, 0.0), c.radius / c.L);
    Vec hw(n, c.radius / c.L);
    if (c.shape == CuspRegion::Shape::box)
        for (int j = 0; j < n; ++j) hw[j] = c.halfwidths[j] / c.L;
    Vec lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
        lo[j] = -hw[j];
        hi[j] = hw[j];
    }
    return box_region(std::move(lo), std::move(hi));
}

// Region containing every v (with v_n > 0) whose entry time can be <= sigma.
inline Region entry_candidate_region(const SplitDims& d, const CuspRegion& c,
                                     const NormPair& norms, double sigma) {
    const int n = d.n, k = d.k;
    Vec a(n, c.radius / c.L);
    if (c.shape == CuspRegion::Shape::box)
        for (int j = 0; j < n; ++j) a[j] = c.halfwidths[j] / c.L;
    const bool euclid_ball = c.shape == CuspRegion::Shape::ball && norms.outer == NormTag::euclidean;
    Vec lo(n), hi(n);
    for (int i = 0; i < k; ++i) hi[i] = sigma * a[n - 1] + a[i];
    for (int j = k; j < n - 1; ++j) hi[j] = a[j];
    hi[n - 1] = a[n - 1];
    for (int i = 0; i < n - 1; ++i) lo[i] = -hi[i];
    lo[n - 1] = 0.0;
    auto member = [d, a, sigma, euclid_ball](const Vec& y) {
        const int nn = d.n;
        const double yn = y[nn - 1];
        if (!(yn > 0.0)) return false;
        if (euclid_ball) {
            double rest = yn * yn;
            for (int j = d.k; j < nn - 1; ++j) rest += y[j] * y[j];
            if (rest > a[nn - 1] * a[nn - 1] * (1.0 + 1e-12)) return false;
        } else {
            for (int j = d.k; j < nn; ++j)
                if (std::fabs(y[j]) > a[j] * (1.0 + 1e-12)) return false;
        }
        for (int i = 0; i < d.k; ++i)
            if (std::fabs(y[i]) > sigma * yn + a[i] + 1e-12 * (1.0 + a[i])) return false;
        return true;
    };
    return Region{std::move(lo), std::move(hi), member};
}

}  // namespace detail

// r_1(x, H(L^-1 C)): infimum of |s| with some primitive lattice vector of
// h_s(x) inside L^-1 C.  Zero iff the lattice already meets L^-1 C
// (s-independent vectors with v_n = 0 included); otherwise a doubling search
// like first_hit, with the same certified-censoring semantics.
inline EntryTime r1_entry(const Lattice& x, const CuspRegion& c, const NormPair& norms,
                          double s_start = 1.0, int max_doublings = 10,
                          const EnumOptions& opt = {}) {
    if (norms.conjugator)
        throw std::invalid_argument("r1_entry: conjugated cusp regions unsupported");
    const SplitDims& d = x.dims;
    {
        auto inside = enumerate_points(x, detail::cusp_region(d, c, norms), true, opt);
        if (!inside.empty()) {
            EntryTime e;
            e.value = 0.0;
            std::sort(inside.begin(), inside.end(),
                      [](const LatticePoint& p, const LatticePoint& q) { return p.coeffs < q.coeffs; });
            e.witness = canonical_sign(inside.front().coeffs);
            return e;
        }
    }
    double sigma = s_start;
    for (int it = 0; it <= max_doublings; ++it) {
        Region region = detail::entry_candidate_region(d, c, norms, sigma);
        auto pts = enumerate_points(x, region, true, opt);
        double best = std::numeric_limits<double>::infinity();
        IntVector wit;
        for (auto& p : pts) {
            auto m = detail::entry_min_s(d, p.point, c, norms);
            if (!m) continue;
            IntVector cs = canonical_sign(p.coeffs);
            if (*m < best - 1e-15 || (std::fabs(*m - best) <= 1e-15 && (wit.empty() || cs < wit))) {
                best = *m;
                wit = std::move(cs);
            }
        }
        if (best <= sigma) {
            EntryTime e;
            e.value = best;
            e.witness = std::move(wit);
            e.searched_bound = sigma;
            return e;
        }
        if (it < max_doublings) sigma *= 2.0;
    }
    EntryTime e;
    e.searched_bound = sigma;
    return e;
}

// --- extreme value observations ------------------------------------------

struct EvlObservation {
    double T = 0.0;
    double M = 0.0;
    double rescaled = 0.0;  // M - (k/n) log T
    bool censored = false;
};

inline EvlObservation evl_statistic(const Lattice& x, double T, const NormPair& norms,
                                    const EnumOptions& opt = {}) {
    if (!(T >= 1.0)) throw std::invalid_argument("evl_statistic: T must be >= 1");
    SupLogAlpha s = sup_log_alpha(x, T, norms, opt);
    const double shift = static_cast<double>(x.dims.k) / x.dims.n * std::log(T);
    return EvlObservation{T, s.M, s.M - shift, false};
}

// Statistic of the conjugated action x -> x g0 U(s) g0^-1: identical to the
// plain statistic of x g0 under the conjugated ambient norm.
inline EvlObservation conjugated_evl_statistic(const Lattice& x, double T,
                                               const SquareMatrix& g0, const NormPair& norms,
                                               const EnumOptions& opt = {}) {
    if (std::fabs(determinant(g0) - 1.0) > 1e-9)
        throw std::invalid_argument("conjugated_evl_statistic: g0 must have det 1");
    bool is_identity = max_abs_diff(g0, SquareMatrix::identity(g0.n)) == 0.0;
    NormPair conj = norms;
    if (!is_identity) conj.set_conjugator(g0);
    return evl_statistic(right_multiply(x, g0), T, conj, opt);
}

// M_T / log T along an increasing horizon sequence; diagnostic only.
inline std::vector<double> loglaw_track(const Lattice& x, const std::vector<double>& horizons,
                                        const NormPair& norms, const EnumOptions& opt = {}) {
    std::vector<double> ratios;
    ratios.reserve(horizons.size());
    double prev = 0.0;
    for (double T : horizons) {
        if (!(T >= 2.0) || T <= prev)
            throw std::invalid_argument("loglaw_track: horizons must be increasing and >= 2");
        prev = T;
        ratios.push_back(sup_log_alpha(x, T, norms, opt).M / std::log(T));
    }
    return ratios;
}

}  // namespace latflow
