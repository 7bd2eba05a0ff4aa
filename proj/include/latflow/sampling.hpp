#pragma once

#include <optional>
#include <string>

#include "latflow/enumerate.hpp"
#include "latflow/rng.hpp"

namespace latflow {

// zeta(n) for n >= 2.  Series summed to M-1 terms, the remainder handled by
// an Euler-Maclaurin tail (plain truncation cannot reach 1e-12 for n = 2):
//   sum_{j>=M} j^-n = M^{1-n}/(n-1) + M^-n/2 + n M^{-n-1}/12
//                     - n(n+1)(n+2) M^{-n-3}/720 + O(M^{-n-5})
inline double zeta(int n) {
    if (n < 2) throw std::invalid_argument("zeta: need n >= 2");
    const double M = 20000.0;
    double s = 0.0;
    for (int j = static_cast<int>(M) - 1; j >= 1; --j) s += std::pow(static_cast<double>(j), -n);
    const double nd = n;
    s += std::pow(M, 1.0 - nd) / (nd - 1.0);
    s += 0.5 * std::pow(M, -nd);
    s += nd / 12.0 * std::pow(M, -nd - 1.0);
    s -= nd * (nd + 1.0) * (nd + 2.0) / 720.0 * std::pow(M, -nd - 3.0);
    return s;
}

enum class SamplerKind { haar_exact_n2, haar_mixing_push, horospherical, ac_gaussian };

inline std::string to_string(SamplerKind k) {
    switch (k) {
        case SamplerKind::haar_exact_n2: return "haar-exact-n2";
        case SamplerKind::haar_mixing_push: return "haar-mixing-push";
        case SamplerKind::horospherical: return "horospherical";
        case SamplerKind::ac_gaussian: return "ac-gaussian";
    }
    return "?";
}

inline SamplerKind sampler_kind_from_string(const std::string& s) {
    if (s == "haar-exact-n2") return SamplerKind::haar_exact_n2;
    if (s == "haar-mixing-push") return SamplerKind::haar_mixing_push;
    if (s == "horospherical") return SamplerKind::horospherical;
    if (s == "ac-gaussian") return SamplerKind::ac_gaussian;
    throw std::invalid_argument("unknown sampler kind: " + s);
}

struct SamplerSpec {
    SamplerKind kind = SamplerKind::ac_gaussian;
    SplitDims dims;
    double push_time = 0.0;                // for haar-mixing-push; default set by validate()
    SamplerKind push_base = SamplerKind::ac_gaussian;  // base law to push
    std::optional<Lattice> base_point;     // for horospherical; default Z^n
    double box_halfwidth = 1.0;            // horospherical coefficient box
    double sigma = 0.3;                    // ac-gaussian entry spread

    void validate() const {
        dims.validate();
        if (kind == SamplerKind::haar_exact_n2 && dims.n != 2)
            throw std::invalid_argument("haar-exact-n2 sampler requires n = 2");
        if (push_time < 0.0) throw std::invalid_argument("push_time must be >= 0");
        if (sigma <= 0.0) throw std::invalid_argument("ac-gaussian sigma must be > 0");
        if (box_halfwidth < 0.0) throw std::invalid_argument("box_halfwidth must be >= 0");
        if (kind == SamplerKind::haar_mixing_push &&
            (push_base == SamplerKind::haar_mixing_push || push_base == SamplerKind::haar_exact_n2))
            throw std::invalid_argument("mixing push base must be ac-gaussian or horospherical");
        if (base_point && base_point->dims != dims)
            throw std::invalid_argument("base_point dims mismatch");
    }

    static SamplerSpec mixing_push(const SplitDims& d, double t = -1.0,
                                   SamplerKind base = SamplerKind::ac_gaussian) {
        SamplerSpec s;
        s.kind = SamplerKind::haar_mixing_push;
        s.dims = d;
        s.push_time = t >= 0.0 ? t : 6.0 / d.k;
        s.push_base = base;
        return s;
    }
    static SamplerSpec haar_exact2() {
        SamplerSpec s;
        s.kind = SamplerKind::haar_exact_n2;
        s.dims = SplitDims(2, 1);
        return s;
    }
};

// Apply the diagonal flow for time -t in steps, re-reducing the basis after
// each step.  A single large push leaves basis entries spanning e^{+-(m+1)t},
// which double-precision reduction cannot handle; stepping keeps the basis
// conditioned while representing the same lattice point throughout.
inline Lattice pushed_lattice(Lattice x, double t) {
    const SplitDims& d = x.dims;
    const double step = 2.0 / std::max(d.k, d.m + 1);
    double remaining = t;
    while (remaining > 0.0) {
        const double dt = std::min(step, remaining);
        remaining -= dt;
        x = diagonal_apply(x, -dt);
        x.basis = lll_reduce_matrix(x.basis).basis;
        renormalize(x);
    }
    return x;
}

// Modular-surface coordinates used by the exact n=2 sampler: u uniform on
// [-1/2, 1/2], y with density proportional to y^-2 on [sqrt(3)/2, inf),
// rejected until u^2 + y^2 >= 1, rotation angle uniform on [0, pi).
struct HaarN2Params {
    double u, y, theta;
};

inline HaarN2Params haar_n2_params(RngStream& rng) {
    const double y_min = std::sqrt(3.0) / 2.0;
    for (;;) {
        const double u = rng.next_uniform(-0.5, 0.5);
        const double y = y_min / (1.0 - rng.next_double());
        if (u * u + y * y >= 1.0) return HaarN2Params{u, y, rng.next_uniform(0.0, std::acos(-1.0))};
    }
}

inline Lattice lattice_from_n2_params(const HaarN2Params& p) {
    const double sy = std::sqrt(p.y);
    SquareMatrix b(2);
    b(0, 0) = 1.0 / sy;
    b(0, 1) = 0.0;
    b(1, 0) = p.u / sy;
    b(1, 1) = sy;
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    SquareMatrix rot(2);
    rot(0, 0) = c;
    rot(0, 1) = s;
    rot(1, 0) = -s;
    rot(1, 1) = c;
    return make_lattice(SplitDims(2, 1), b * rot);
}

inline Lattice sample(const SamplerSpec& spec, RngStream& rng) {
    spec.validate();
    const SplitDims& d = spec.dims;
    switch (spec.kind) {
        case SamplerKind::haar_exact_n2:
            return lattice_from_n2_params(haar_n2_params(rng));
        case SamplerKind::ac_gaussian: {
            for (;;) {
                SquareMatrix b = SquareMatrix::identity(d.n);
                for (auto& v : b.a) v += spec.sigma * rng.next_gaussian();
                if (std::fabs(determinant(b)) >= 0.1) return make_lattice(d, std::move(b));
            }
        }
        case SamplerKind::horospherical: {
            Vec block(static_cast<size_t>(d.k) * (d.m + 1));
            for (auto& v : block) v = rng.next_uniform(-spec.box_halfwidth, spec.box_halfwidth);
            const Lattice x0 = spec.base_point ? *spec.base_point : integer_lattice(d);
            return right_multiply(x0, horospherical_matrix(d, block));
        }
        case SamplerKind::haar_mixing_push: {
            SamplerSpec base = spec;
            base.kind = spec.push_base;
            Lattice x = sample(base, rng);
            return pushed_lattice(x, spec.push_time);
        }
    }
    throw std::logic_error("sample: unreachable");
}

// --- moment diagnostics --------------------------------------------------

struct Diagnostic {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double reference = 0.0;
    long long n = 0;
    double z() const { return stderr_ > 0.0 ? (estimate - reference) / stderr_ : 0.0; }
};

namespace detail {

struct MeanAcc {
    double sum = 0.0, sumsq = 0.0;
    long long n = 0;
    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++n;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double stderr_() const {
        if (n < 2) return 0.0;
        const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1));
        return std::sqrt(var / n);
    }
};

}  // namespace detail

// Mean primitive-point count over the sampled law vs vol(region)/zeta(n).
inline Diagnostic siegel_mean_diagnostic(const SamplerSpec& spec, const Region& region,
                                         double region_volume, long long nsamples,
                                         std::uint64_t seed, const EnumOptions& opt = {}) {
    if (nsamples < 100) throw std::invalid_argument("siegel diagnostic: need N >= 100");
    detail::MeanAcc acc;
    for (long long i = 0; i < nsamples; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Lattice x = sample(spec, rng);
        acc.add(static_cast<double>(enumerate_points(x, region, true, opt).size()));
    }
    return Diagnostic{acc.mean(), acc.stderr_(), region_volume / zeta(spec.dims.n), acc.n};
}

// Mean number of ordered linearly independent primitive pairs in the region
// vs (vol/zeta(n))^2; the identity behind it needs n >= 3.
inline Diagnostic rogers_second_moment_diagnostic(const SamplerSpec& spec, const Region& region,
                                                  double region_volume, long long nsamples,
                                                  std::uint64_t seed, const EnumOptions& opt = {}) {
    if (spec.dims.n < 3)
        throw std::invalid_argument("rogers diagnostic: unsupported for n = 2");
    if (nsamples < 100) throw std::invalid_argument("rogers diagnostic: need N >= 100");
    detail::MeanAcc acc;
    for (long long i = 0; i < nsamples; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        Lattice x = sample(spec, rng);
        auto pts = enumerate_points(x, region, true, opt);
        const long long c = static_cast<long long>(pts.size());
        // primitive v, w are linearly dependent iff w = +-v
        long long dependent = c;  // the diagonal pairs (v, v)
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = 0; b < pts.size(); ++b) {
                if (a == b) continue;
                bool neg = true;
                for (size_t l = 0; l < pts[a].coeffs.size(); ++l)
                    if (pts[a].coeffs[l] != -pts[b].coeffs[l]) {
                        neg = false;
                        break;
                    }
                if (neg) ++dependent;
            }
        acc.add(static_cast<double>(c * c - dependent));
    }
    const double ref = region_volume / zeta(spec.dims.n);
    return Diagnostic{acc.mean(), acc.stderr_(), ref * ref, acc.n};
}

}  // namespace latflow
