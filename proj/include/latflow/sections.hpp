#pragma once

#include <optional>

#include "latflow/enumerate.hpp"
#include "latflow/window.hpp"

namespace latflow {

// One section hit: a primitive lattice vector v with v_n > 0 and
// (v'', v_n) in L^-1 W.  The hit time is s = v'/v_n and the rescaled impact
// is w = L*(v'', v_n), which lands back in W.
struct HitRecord {
    Vec s;              // in R^k
    double snorm = 0.0; // |s| in the inner norm
    Vec w;              // in W, m+1 entries
    IntVector witness;  // coefficients of v
    Vec v;              // embedded vector
};

namespace detail {

// Slab {y_n > 0, L (y'', y_n) in W, |y'_i| <= bound y_n}.  The |s| <= bound
// condition itself is not tested here (membership keeps the region a
// superset); callers filter on the exact inner norm of y'/y_n.
inline Region hit_slab_region(const SplitDims& d, const Window& w, double L, double per_coord_bound) {
    Vec wlo, whi;
    w.bounding_box(wlo, whi);
    const int n = d.n, k = d.k;
    Vec lo(n), hi(n);
    const double yn_max = w.w_max() / L;
    for (int i = 0; i < k; ++i) {
        lo[i] = -per_coord_bound * yn_max;
        hi[i] = per_coord_bound * yn_max;
    }
    for (int j = 0; j <= d.m; ++j) {
        lo[k + j] = wlo[j] / L;
        hi[k + j] = whi[j] / L;
    }
    lo[n - 1] = std::max(lo[n - 1], 0.0);
    auto member = [d, w, L](const Vec& y) {
        const double yn = y[d.n - 1];
        if (!(yn > 0.0)) return false;
        Vec ww(d.m + 1);
        for (int j = 0; j <= d.m; ++j) ww[j] = L * y[d.k + j];
        return w.contains(ww);
    };
    return Region{std::move(lo), std::move(hi), member};
}

}  // namespace detail

// All hits with |s| <= s_bound, ordered by |s| with lexicographic witness
// tie-break.  Multiplicities show up as distinct witnesses sharing s.
inline std::vector<HitRecord> list_hits(const Lattice& x, const Window& w, double L,
                                        double s_bound, const NormPair& norms,
                                        const EnumOptions& opt = {}) {
    if (!(L > 0.0)) throw std::invalid_argument("list_hits: L must be positive");
    if (!(s_bound > 0.0)) throw std::invalid_argument("list_hits: s_bound must be positive");
    if (!(w.w_max() > 0.0)) throw std::invalid_argument("list_hits: empty window");
    const SplitDims& d = x.dims;
    if (w.dims != d) throw std::invalid_argument("list_hits: window dims mismatch");

    // |s_i| <= |s| <= s_bound for both supported inner norms
    Region region = detail::hit_slab_region(d, w, L, s_bound);
    auto pts = enumerate_points(x, region, /*primitive_only=*/true, opt);

    std::vector<HitRecord> hits;
    hits.reserve(pts.size());
    for (auto& p : pts) {
        const double vn = p.point[d.n - 1];
        HitRecord h;
        h.s.resize(d.k);
        for (int i = 0; i < d.k; ++i) h.s[i] = p.point[i] / vn;
        h.snorm = norms.inner_norm(h.s);
        if (h.snorm > s_bound * (1.0 + 1e-12)) continue;
        h.w.resize(d.m + 1);
        for (int j = 0; j <= d.m; ++j) h.w[j] = L * p.point[d.k + j];
        h.witness = std::move(p.coeffs);
        h.v = std::move(p.point);
        hits.push_back(std::move(h));
    }
    std::sort(hits.begin(), hits.end(), [](const HitRecord& a, const HitRecord& b) {
        if (a.snorm != b.snorm) return a.snorm < b.snorm;
        return a.witness < b.witness;
    });
    return hits;
}

struct FirstHit {
    std::optional<HitRecord> record;  // empty: nothing within the search budget
    double searched_bound = 0.0;      // |s| range certified hit-free when empty
    bool censored() const { return !record.has_value(); }
};

// Minimal-|s| hit, found by doubling the search bound from s_start.  The
// default budget allows 10 doublings (bound 2^10 s_start).
inline FirstHit first_hit(const Lattice& x, const Window& w, double L, const NormPair& norms,
                          double s_start, int max_doublings = 10, const EnumOptions& opt = {}) {
    if (!(s_start > 0.0)) throw std::invalid_argument("first_hit: s_start must be positive");
    double bound = s_start;
    for (int it = 0; it <= max_doublings; ++it) {
        auto hits = list_hits(x, w, L, bound, norms, opt);
        if (!hits.empty()) return FirstHit{std::move(hits.front()), bound};
        if (it < max_doublings) bound *= 2.0;
    }
    return FirstHit{std::nullopt, bound};
}

// L^{-n/k} |xi_1|; empty when the search budget ran out.
inline std::optional<double> scaled_first_hit_statistic(const Lattice& x, const Window& w,
                                                        double L, const NormPair& norms,
                                                        double s_start = 1.0,
                                                        int max_doublings = 10,
                                                        const EnumOptions& opt = {}) {
    FirstHit fh = first_hit(x, w, L, norms, s_start, max_doublings, opt);
    if (fh.censored()) return std::nullopt;
    const double scale = std::pow(L, -static_cast<double>(x.dims.n) / x.dims.k);
    return scale * fh.record->snorm;
}

// Number of primitive lattice points in C(A, L^-1 W) for an inner-norm ball
// A of radius `radius`: (y_1..y_k) in y_n A and (y_{k+1}..y_n) in L^-1 W.
inline long long count_in_cone_slab(const Lattice& x, double radius, const Window& w, double L,
                                    const NormPair& norms, const EnumOptions& opt = {}) {
    const SplitDims& d = x.dims;
    Region region = detail::hit_slab_region(d, w, L, radius);
    auto base_member = region.member;
    region.member = [base_member, d, norms, radius](const Vec& y) {
        if (!base_member(y)) return false;
        const double yn = y[d.n - 1];
        Vec s(d.k);
        for (int i = 0; i < d.k; ++i) s[i] = y[i] / yn;
        return norms.inner_norm(s) <= radius * (1.0 + 1e-12);
    };
    return static_cast<long long>(enumerate_points(x, region, true, opt).size());
}

// Event {# hits with L^{-n/k} xi_j in A_i equals N_i for every i} where the
// A_i are inner-norm balls of the given radii.
inline bool joint_count_event(const Lattice& x, const std::vector<double>& radii,
                              const std::vector<long long>& counts, const Window& w, double L,
                              const NormPair& norms, const EnumOptions& opt = {}) {
    if (radii.size() != counts.size())
        throw std::invalid_argument("joint_count_event: radii/counts size mismatch");
    const double scale = std::pow(L, static_cast<double>(x.dims.n) / x.dims.k);
    for (size_t i = 0; i < radii.size(); ++i) {
        if (count_in_cone_slab(x, scale * radii[i], w, L, norms, opt) != counts[i]) return false;
    }
    return true;
}

struct ImpactEvent {
    std::optional<bool> value;  // empty when the first-hit search was censored
    std::optional<HitRecord> record;
};

// Joint first-hit event {L^{-n/k} |xi_1| > X and impact w-marginal in Bsub}.
inline ImpactEvent impact_marginal_event(const Lattice& x, const Window& w, double L, double X,
                                         const std::function<bool(const Vec&)>& sub_window,
                                         const NormPair& norms, double s_start = 1.0,
                                         int max_doublings = 10, const EnumOptions& opt = {}) {
    FirstHit fh = first_hit(x, w, L, norms, s_start, max_doublings, opt);
    if (fh.censored()) return ImpactEvent{std::nullopt, std::nullopt};
    const double scale = std::pow(L, -static_cast<double>(x.dims.n) / x.dims.k);
    const bool tail = scale * fh.record->snorm > X;
    const bool in_sub = sub_window(fh.record->w);
    return ImpactEvent{tail && in_sub, std::move(fh.record)};
}

}  // namespace latflow
