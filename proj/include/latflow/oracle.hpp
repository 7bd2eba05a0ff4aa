#pragma once

#include "latflow/sampling.hpp"
#include "latflow/sections.hpp"

namespace latflow {

struct OracleEstimate {
    double value = 0.0;
    double stderr_ = 0.0;  // sqrt(p(1-p)/N) for frequencies
    long long n = 0;
    std::string event;
};

inline OracleEstimate frequency_estimate(long long hits, long long n, std::string event) {
    const double p = n > 0 ? static_cast<double>(hits) / n : 0.0;
    return OracleEstimate{p, n > 0 ? std::sqrt(std::max(p * (1.0 - p), 0.0) / n) : 0.0, n,
                          std::move(event)};
}

// Smallest |s_v| over primitive v in the slab {(v'', v_n) in L^-1 W}, among
// hits with |s_v| <= bound; empty if none.  One enumeration, no doubling.
inline std::optional<double> min_hit_snorm(const Lattice& x, const Window& w, double L,
                                           double bound, const NormPair& norms,
                                           const EnumOptions& opt = {}) {
    Region region = detail::hit_slab_region(x.dims, w, L, bound);
    auto pts = enumerate_points(x, region, true, opt);
    double best = std::numeric_limits<double>::infinity();
    const int k = x.dims.k, n = x.dims.n;
    Vec s(k);
    for (auto& p : pts) {
        const double vn = p.point[n - 1];
        for (int i = 0; i < k; ++i) s[i] = p.point[i] / vn;
        best = std::min(best, norms.inner_norm(s));
    }
    if (best <= bound * (1.0 + 1e-12)) return best;
    return std::nullopt;
}

// P(hat Z^n g avoids C(B_X, W)) over the sampled law, evaluated on a whole
// grid of X values with common random lattices; exact monotonicity in X by
// construction.  Also reports the per-sample censoring count against the
// enumeration cap.
struct Psi0Curve {
    std::vector<double> X;
    std::vector<OracleEstimate> avoid;  // Psi_0(B_X)
    long long censored = 0;
};

inline Psi0Curve psi0_curve(std::vector<double> xs, const Window& w, const SplitDims& dims,
                            const NormPair& norms, const SamplerSpec& sampler, long long nsamples,
                            std::uint64_t seed, const EnumOptions& opt = {}) {
    if (w.dims != dims || sampler.dims != dims)
        throw std::invalid_argument("psi0_curve: dims mismatch");
    if (xs.empty()) throw std::invalid_argument("psi0_curve: empty grid");
    for (double x : xs)
        if (!(x > 0.0)) throw std::invalid_argument("psi0_curve: X must be positive");
    std::sort(xs.begin(), xs.end());
    const double xmax = xs.back();
    std::vector<long long> above(xs.size(), 0);
    long long censored = 0, used = 0;
    for (long long i = 0; i < nsamples; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Lattice x = sample(sampler, rng);
        double v;
        try {
            auto m = min_hit_snorm(x, w, 1.0, xmax, norms, opt);
            v = m ? *m : std::numeric_limits<double>::infinity();
        } catch (const EnumerationCapError&) {
            ++censored;
            continue;
        }
        ++used;
        for (size_t j = 0; j < xs.size(); ++j)
            if (v > xs[j]) ++above[j];
    }
    Psi0Curve out;
    out.X = xs;
    out.censored = censored;
    for (size_t j = 0; j < xs.size(); ++j)
        out.avoid.push_back(frequency_estimate(above[j], used, "psi0(B_X) avoidance"));
    return out;
}

inline OracleEstimate psi0(double X, const Window& w, const SplitDims& dims, const NormPair& norms,
                           const SamplerSpec& sampler, long long nsamples, std::uint64_t seed,
                           const EnumOptions& opt = {}) {
    return psi0_curve({X}, w, dims, norms, sampler, nsamples, seed, opt).avoid.front();
}

// Psi_N^{(r)}: probability of the joint hit-count event at L = 1.
inline OracleEstimate psi_N_oracle(const std::vector<double>& radii,
                                   const std::vector<long long>& counts, const Window& w,
                                   const SplitDims& dims, const NormPair& norms,
                                   const SamplerSpec& sampler, long long nsamples,
                                   std::uint64_t seed, const EnumOptions& opt = {}) {
    if (w.dims != dims || sampler.dims != dims)
        throw std::invalid_argument("psi_N_oracle: dims mismatch");
    long long hits = 0, used = 0;
    for (long long i = 0; i < nsamples; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Lattice x = sample(sampler, rng);
        try {
            if (joint_count_event(x, radii, counts, w, 1.0, norms, opt)) ++hits;
            ++used;
        } catch (const EnumerationCapError&) {
        }
    }
    return frequency_estimate(hits, used, "joint count event");
}

// Upper-tail constant: vol of the inner-norm unit ball over zeta(n) times
// the window moment integral of y_n^k.
inline double kappa(const SplitDims& dims, const NormPair& norms, const Window& w) {
    return detail::unit_ball_volume(dims.k, norms.inner) / zeta(dims.n) * w.moment(dims.k);
}

inline double kappa(const SplitDims& dims, const NormPair& norms) {
    return kappa(dims, norms, Window::projected_ball(dims, norms.outer));
}

// Tail of the rescaled-sup limit density: int_Y^inf eta = 1 - Psi_0(B_X)
// at X = exp(-(n/k) Y), with the projected-ball window.
struct EtaTailCurve {
    std::vector<double> Y;
    std::vector<OracleEstimate> tail;
    long long censored = 0;
};

inline EtaTailCurve eta_tail_curve(std::vector<double> ys, const SplitDims& dims,
                                   const NormPair& norms, const SamplerSpec& sampler,
                                   long long nsamples, std::uint64_t seed,
                                   const EnumOptions& opt = {}) {
    std::sort(ys.begin(), ys.end());
    std::vector<double> xs;
    const double rate = static_cast<double>(dims.n) / dims.k;
    for (double y : ys) xs.push_back(std::exp(-rate * y));
    Window w = Window::projected_ball(dims, norms.outer);
    Psi0Curve curve = psi0_curve(xs, w, dims, norms, sampler, nsamples, seed, opt);
    EtaTailCurve out;
    out.Y = ys;
    out.censored = curve.censored;
    for (size_t j = 0; j < ys.size(); ++j) {
        // psi0_curve sorts X ascending = Y descending
        const size_t idx = curve.X.size() - 1 - j;
        OracleEstimate e = curve.avoid[idx];
        e.value = 1.0 - e.value;
        e.event = "eta tail";
        out.tail.push_back(e);
    }
    return out;
}

inline OracleEstimate eta_tail(double Y, const SplitDims& dims, const NormPair& norms,
                               const SamplerSpec& sampler, long long nsamples, std::uint64_t seed,
                               const EnumOptions& opt = {}) {
    return eta_tail_curve({Y}, dims, norms, sampler, nsamples, seed, opt).tail.front();
}

// --- cone avoidance -------------------------------------------------------

// C_{k,m}(R, S): euclidean cone |y'|_2 <= y_n <= R crossed with the
// m-dimensional euclidean ball of radius S.
struct ConeRegion {
    int k = 1, m = 0;
    double R = 1.0, S = 1.0;

    int n() const { return k + m + 1; }
    Region region() const {
        const int nn = n();
        Vec lo(nn), hi(nn);
        for (int i = 0; i < k; ++i) {
            lo[i] = -R;
            hi[i] = R;
        }
        for (int j = 0; j < m; ++j) {
            lo[k + j] = -S;
            hi[k + j] = S;
        }
        lo[nn - 1] = 0.0;
        hi[nn - 1] = R;
        const int kk = k, mm = m;
        const double RR = R, SS = S;
        return Region{std::move(lo), std::move(hi), [kk, mm, RR, SS](const Vec& y) {
                          const int nn2 = kk + mm + 1;
                          const double yn = y[nn2 - 1];
                          if (yn < 0.0 || yn > RR * (1.0 + 1e-12)) return false;
                          double a = 0.0;
                          for (int i = 0; i < kk; ++i) a += y[i] * y[i];
                          if (a > yn * yn * (1.0 + 1e-12) + 1e-300) return false;
                          double b = 0.0;
                          for (int j = 0; j < mm; ++j) b += y[kk + j] * y[kk + j];
                          return b <= SS * SS * (1.0 + 1e-12);
                      }};
    }
    double volume() const {
        // cone of height R over the k-ball, times the m-ball of radius S
        const double vk = detail::unit_ball_volume(k, NormTag::euclidean);
        const double vm = detail::unit_ball_volume(m, NormTag::euclidean);
        return vk * std::pow(R, k + 1) / (k + 1) * vm * std::pow(S, m);
    }
};

// The SL(n) rescaling sends C_{k,m}(R, S) to C_{k,m}(R^{(k+1)/n} S^{m/n}).
inline double fkm_rescaled_radius(int k, int m, double R, double S) {
    const double n = k + m + 1;
    return std::pow(R, (k + 1) / n) * std::pow(S, m / n);
}

inline OracleEstimate fkm_probability(double R, double S, int k, int m,
                                      const SamplerSpec& sampler, long long nsamples,
                                      std::uint64_t seed, const EnumOptions& opt = {}) {
    if (!(R > 0.0) || !(S > 0.0)) throw std::invalid_argument("fkm_probability: need R, S > 0");
    ConeRegion cone{k, m, R, S};
    Region region = cone.region();
    long long avoid = 0, used = 0;
    for (long long i = 0; i < nsamples; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Lattice x = sample(sampler, rng);
        try {
            if (enumerate_points(x, region, true, opt).empty()) ++avoid;
            ++used;
        } catch (const EnumerationCapError&) {
        }
    }
    return frequency_estimate(avoid, used, "cone avoidance");
}

inline OracleEstimate fkm_probability(double R, int k, int m, const SamplerSpec& sampler,
                                      long long nsamples, std::uint64_t seed,
                                      const EnumOptions& opt = {}) {
    return fkm_probability(R, R, k, m, sampler, nsamples, seed, opt);
}

// --- tail report -----------------------------------------------------------

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

// Weighted least squares y = a + b x with per-point standard deviations.
inline SlopeFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::vector<double>& sigmas) {
    if (xs.size() < 2 || xs.size() != ys.size() || xs.size() != sigmas.size())
        throw std::invalid_argument("fit_line: need >= 2 matched points");
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double w = 1.0 / std::max(sigmas[i] * sigmas[i], 1e-30);
        sw += w;
        sx += w * xs[i];
        sy += w * ys[i];
        sxx += w * xs[i] * xs[i];
        sxy += w * xs[i] * ys[i];
    }
    const double det = sw * sxx - sx * sx;
    SlopeFit f;
    f.slope = (sw * sxy - sx * sy) / det;
    f.intercept = (sxx * sy - sx * sxy) / det;
    f.slope_stderr = std::sqrt(sw / det);
    return f;
}

struct TailReportRow {
    double X = 0.0;
    double value = 0.0;   // 1 - Psi_0 (small X) or Psi_0 (large X)
    double stderr_ = 0.0;
    double model = 0.0;   // kappa X^k for small X
    double ratio = 0.0;   // value / model
};

struct TailReport {
    std::vector<TailReportRow> small_rows;
    std::vector<TailReportRow> large_rows;
    double kappa_value = 0.0;
    SlopeFit large_fit;   // slope of log Psi_0 vs log X
    long long censored = 0;
};

inline TailReport tail_report(const SplitDims& dims, const NormPair& norms,
                              const std::vector<double>& x_small,
                              const std::vector<double>& x_large, const SamplerSpec& sampler,
                              long long nsamples, std::uint64_t seed,
                              const EnumOptions& opt = {}) {
    Window w = Window::projected_ball(dims, norms.outer);
    TailReport rep;
    rep.kappa_value = kappa(dims, norms, w);
    std::vector<double> xs = x_small;
    xs.insert(xs.end(), x_large.begin(), x_large.end());
    Psi0Curve curve = psi0_curve(xs, w, dims, norms, sampler, nsamples, seed, opt);
    rep.censored = curve.censored;
    auto lookup = [&](double x) {
        for (size_t i = 0; i < curve.X.size(); ++i)
            if (std::fabs(curve.X[i] - x) <= 1e-12 * (1.0 + x)) return curve.avoid[i];
        throw std::logic_error("tail_report: grid lookup failed");
    };
    for (double x : x_small) {
        OracleEstimate e = lookup(x);
        TailReportRow row;
        row.X = x;
        row.value = 1.0 - e.value;
        row.stderr_ = e.stderr_;
        row.model = rep.kappa_value * std::pow(x, dims.k);
        row.ratio = row.model > 0.0 ? row.value / row.model : 0.0;
        rep.small_rows.push_back(row);
    }
    std::vector<double> lx, ly, ls;
    for (double x : x_large) {
        OracleEstimate e = lookup(x);
        TailReportRow row;
        row.X = x;
        row.value = e.value;
        row.stderr_ = e.stderr_;
        rep.large_rows.push_back(row);
        if (e.value > 0.0) {
            lx.push_back(std::log(x));
            ly.push_back(std::log(e.value));
            ls.push_back(e.stderr_ / e.value);  // delta method on log
        }
    }
    if (lx.size() >= 2) rep.large_fit = fit_line(lx, ly, ls);
    return rep;
}

}  // namespace latflow
