// Acceptance suite: one pass/fail line per criterion, exit code = number of
// hard failures.  Every tolerance is pinned here, in code.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <latflow/experiment.hpp>

#include "../oracles.hpp"

using namespace latflow;

namespace {

const NormPair kEE(NormTag::euclidean, NormTag::euclidean);
constexpr std::uint64_t kSeed = 20240808;

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int idx, bool pass, const std::string& what, const std::string& detail,
            double secs, bool soft = false) {
    if (!pass && !soft) ++failures;
    std::printf("[%s] %2d. %-28s %s (%.1fs)\n", soft ? (pass ? "soft" : "SOFT") : (pass ? "PASS" : "FAIL"),
                idx, what.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
}

SplitDims random_dims(RngStream& rng, int nmin, int nmax) {
    const int n = nmin + static_cast<int>(rng.next_u64() % (nmax - nmin + 1));
    const int k = 1 + static_cast<int>(rng.next_u64() % (n - 1));
    return SplitDims(n, k);
}

// ---------------------------------------------------------------------------
// 1. exact identities
// ---------------------------------------------------------------------------

double check_commutation(RngStream& rng) {
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
        SplitDims d = random_dims(rng, 2, 4);
        Lattice x = oracles::random_test_lattice(d, rng);
        const double t = rng.next_uniform(-0.5, 0.5);
        Vec s(d.k), se(d.k);
        for (int i = 0; i < d.k; ++i) {
            s[i] = rng.next_uniform(-2, 2);
            se[i] = std::exp(d.n * t) * s[i];
        }
        Lattice a = diagonal_apply(unipotent_apply(x, s), t);
        Lattice b = unipotent_apply(diagonal_apply(x, t), se);
        worst = std::max(worst, max_abs_diff(a.basis, b.basis));
    }
    return worst;
}

double check_hit_scaling(RngStream& rng) {
    double worst = 0.0;
    int done = 0;
    while (done < 200) {
        SplitDims d = random_dims(rng, 2, 3);
        Lattice x = oracles::random_test_lattice(d, rng);
        Window w = Window::projected_ball(d, NormTag::euclidean);
        const double L = rng.next_uniform(1.5, 4.0);
        const double t = rng.next_uniform(0.0, std::log(L) / d.k);
        const double sb = rng.next_uniform(1.0, 3.0);
        auto base = list_hits(x, w, L, sb, kEE);
        auto moved =
            list_hits(diagonal_apply(x, -t), w, L * std::exp(-d.k * t), sb * std::exp(-d.n * t), kEE);
        if (base.size() != moved.size()) return 1.0;
        const double f = std::exp(d.n * t);
        for (size_t i = 0; i < base.size(); ++i) {
            if (base[i].witness != moved[i].witness) return 1.0;
            for (int j = 0; j < d.k; ++j)
                worst = std::max(worst, std::fabs(base[i].s[j] - f * moved[i].s[j]) /
                                            (1.0 + std::fabs(base[i].s[j])));
        }
        ++done;
    }
    return worst;
}

double check_r1_scaling(RngStream& rng) {
    double worst = 0.0;
    int done = 0;
    while (done < 200) {
        SplitDims d = random_dims(rng, 2, 3);
        Lattice x = oracles::random_test_lattice(d, rng);
        const double t = rng.next_uniform(0.0, 0.5);
        const double a = rng.next_uniform(0.6, 1.4);
        Vec hw(d.n, a), hw_t(d.n);
        for (int i = 0; i < d.k; ++i) hw_t[i] = a * std::exp(-(d.m + 1) * t);
        for (int j = d.k; j < d.n; ++j) hw_t[j] = a * std::exp(d.k * t);
        EntryTime base = r1_entry(x, CuspRegion::box(1.0, hw), kEE, 1.0, 9);
        EntryTime moved = r1_entry(diagonal_apply(x, -t), CuspRegion::box(1.0, hw_t), kEE, 1.0, 12);
        if (base.censored()) continue;
        if (moved.censored()) return 1.0;
        worst = std::max(worst, std::fabs(*base.value - std::exp(d.n * t) * *moved.value) /
                                    (1.0 + *base.value));
        ++done;
    }
    return worst;
}

double check_conjugation(RngStream& rng) {
    // xi^{g0}_j(x, L) = xi_j(x g0, L): the hit list of x g0 reproduces the
    // conjugated action, verified per hit through the product g0 U(s) g0^-1
    // and in count against the brute-force oracle.
    double worst = 0.0;
    int done = 0;
    while (done < 200) {
        SplitDims d = random_dims(rng, 2, 3);
        Lattice x = oracles::random_test_lattice(d, rng);
        const SquareMatrix g0 = oracles::random_test_lattice(d, rng, 0.3).basis;
        Lattice xg0 = right_multiply(x, g0);
        Window w = Window::projected_ball(d, NormTag::euclidean);
        const double L = rng.next_uniform(1.0, 2.5);
        const double sb = rng.next_uniform(0.5, 2.0);
        auto hits = list_hits(xg0, w, L, sb, kEE);
        const SquareMatrix g0inv = inverse(g0);
        for (const auto& h : hits) {
            // act on x by the conjugated shear, then return to standard
            // coordinates; the witness must land on the section
            SquareMatrix conj_elem = (g0 * shear_matrix(d, h.s)) * g0inv;
            SquareMatrix acted = (x.basis * conj_elem) * g0;
            Vec v = row_times(h.witness, acted);
            for (int i = 0; i < d.k; ++i)
                worst = std::max(worst, std::fabs(v[i]) / (1.0 + std::fabs(h.s[i])));
            Vec ww(d.m + 1);
            for (int j = 0; j <= d.m; ++j) ww[j] = L * v[d.k + j];
            if (!w.contains(ww)) return 1.0;
            worst = std::max(worst, max_abs_diff(ww, h.w));
        }
        // completeness and multiplicity against the coefficient-box oracle
        Region slab = latflow::detail::hit_slab_region(d, w, L, sb);
        auto base_member = slab.member;
        slab.member = [base_member, d, sb](const Vec& y) {
            if (!base_member(y)) return false;
            Vec s(d.k);
            for (int i = 0; i < d.k; ++i) s[i] = y[i] / y[d.n - 1];
            return norm_of(s, NormTag::euclidean) <= sb * (1.0 + 1e-12);
        };
        auto oracle = oracles::brute_force_points(xg0, slab, true);
        if (hits.size() != oracle.size()) return 1.0;
        ++done;
    }
    return worst;
}

double check_c_plus(RngStream& rng) {
    double worst = 0.0;
    int done = 0;
    while (done < 200) {
        SplitDims d = random_dims(rng, 2, 3);
        Lattice x = oracles::random_test_lattice(d, rng);
        CuspRegion c = CuspRegion::ball(rng.next_uniform(1.0, 2.5));
        EntryTime via_plus = r1_entry(x, c, kEE, 4.0, 4);
        // plain C route: both v_n signs, direct membership
        const double r = c.radius / c.L;
        Vec lo(d.n), hi(d.n);
        for (int i = 0; i < d.k; ++i) hi[i] = 64.0 * r + r;
        for (int j = d.k; j < d.n; ++j) hi[j] = r;
        for (int i = 0; i < d.n; ++i) lo[i] = -hi[i];
        Region region{lo, hi, [](const Vec&) { return true; }};
        double best = std::numeric_limits<double>::infinity();
        {
            auto inside = enumerate_points(x, latflow::detail::cusp_region(d, c, kEE), true, {});
            if (!inside.empty()) best = 0.0;
        }
        for (auto& p : enumerate_points(x, region, true, {})) {
            const double vn = p.point[d.n - 1];
            if (vn == 0.0) continue;
            double rest = vn * vn;
            for (int j = d.k; j < d.n - 1; ++j) rest += p.point[j] * p.point[j];
            const double disc = r * r - rest;
            if (disc < 0.0) continue;
            Vec cc(d.k);
            for (int i = 0; i < d.k; ++i) cc[i] = p.point[i] / vn;
            best = std::min(best, min_norm_in_l2_ball(cc, std::sqrt(disc) / std::fabs(vn),
                                                      NormTag::euclidean));
        }
        if (via_plus.censored()) {
            if (best <= via_plus.searched_bound - 1e-12) return 1.0;
        } else {
            worst = std::max(worst, std::fabs(*via_plus.value - best) / (1.0 + best));
        }
        ++done;
    }
    return worst;
}

void criterion_1() {
    Timer timer;
    RngStream rng(kSeed, 1);
    const double e1 = check_commutation(rng);
    const double e2 = check_hit_scaling(rng);
    const double e3 = check_r1_scaling(rng);
    const double e4 = check_conjugation(rng);
    const double e5 = check_c_plus(rng);
    const double worst = std::max({e1, e2, e3, e4, e5});
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "commutation %.1e, hit-scaling %.1e, r1-scaling %.1e, conjugation %.1e, "
                  "C-vs-C+ %.1e  (tol 1e-9)",
                  e1, e2, e3, e4, e5);
    report(1, worst <= 1e-9, "exact identities", buf, timer.secs());
}

// ---------------------------------------------------------------------------
// 2. counting identity vs brute force
// ---------------------------------------------------------------------------

void criterion_2() {
    Timer timer;
    RngStream rng(kSeed, 2);
    long long checked = 0, mismatches = 0;
    for (int n = 2; n <= 4; ++n) {
        int done = 0;
        while (done < 200) {
            const int k = 1 + static_cast<int>(rng.next_u64() % (n - 1));
            SplitDims d(n, k);
            Lattice x = oracles::random_test_lattice(d, rng);
            Window w = Window::projected_ball(d, NormTag::euclidean);
            const double L = rng.next_uniform(1.0, 2.5);
            const double X = rng.next_uniform(0.2, 2.0);
            auto hits = list_hits(x, w, L, X, kEE);
            Region slab = latflow::detail::hit_slab_region(d, w, L, X);
            auto base_member = slab.member;
            slab.member = [base_member, d, X](const Vec& y) {
                if (!base_member(y)) return false;
                Vec s(d.k);
                for (int i = 0; i < d.k; ++i) s[i] = y[i] / y[d.n - 1];
                return norm_of(s, NormTag::euclidean) <= X * (1.0 + 1e-12);
            };
            auto oracle = oracles::brute_force_points(x, slab, true);
            ++checked;
            if (hits.size() != oracle.size()) ++mismatches;
            ++done;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%lld instances (n=2,3,4), %lld mismatches", checked, mismatches);
    report(2, mismatches == 0, "counting identity", buf, timer.secs());
}

// ---------------------------------------------------------------------------
// 3. EVL <-> entry time equivalence
// ---------------------------------------------------------------------------

void criterion_3() {
    Timer timer;
    RngStream rng(kSeed, 3);
    long long checked = 0, mismatches = 0;
    for (int n = 2; n <= 3; ++n) {
        int done = 0;
        while (done < 200) {
            const int k = 1 + static_cast<int>(rng.next_u64() % (n - 1));
            SplitDims d(n, k);
            Lattice x = oracles::random_test_lattice(d, rng);
            const double T = rng.next_uniform(1.0, 15.0);
            const double logL = rng.next_uniform(-0.2, 1.2);
            const bool sup_side = sup_log_alpha(x, T, kEE).M >= logL;
            EntryTime r1 = r1_entry(x, CuspRegion::ball(std::exp(logL)), kEE, T, 6);
            const bool entry_side = r1.value.has_value() && *r1.value <= T;
            ++checked;
            if (sup_side != entry_side) ++mismatches;
            ++done;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%lld triples (n=2,3), %lld boolean mismatches", checked,
                  mismatches);
    report(3, mismatches == 0, "sup/entry threshold equiv", buf, timer.secs());
}

// ---------------------------------------------------------------------------
// 4. sampler diagnostics
// ---------------------------------------------------------------------------

void criterion_4() {
    Timer timer;
    const double pi = std::acos(-1.0);
    Diagnostic s2 = siegel_mean_diagnostic(SamplerSpec::haar_exact2(), ball_region(Vec(2, 0.0), 1.0),
                                           pi, 10000, kSeed + 4);
    SamplerSpec push31 = SamplerSpec::mixing_push(SplitDims(3, 1));  // push time 6/k = 6
    const double vol3 = 4.0 * pi / 3.0;
    Diagnostic s3 = siegel_mean_diagnostic(push31, ball_region(Vec(3, 0.0), 1.0), vol3, 10000,
                                           kSeed + 5);
    Diagnostic rg = rogers_second_moment_diagnostic(push31, ball_region(Vec(3, 0.0), 1.0), vol3,
                                                    10000, kSeed + 6);
    const bool pass = std::fabs(s2.z()) <= 3.0 && std::fabs(s3.z()) <= 3.0 && std::fabs(rg.z()) <= 3.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "siegel n2 %.4f vs %.4f (z %+0.2f); siegel n3 %.4f vs %.4f (z %+0.2f); "
                  "rogers %.3f vs %.3f (z %+0.2f)",
                  s2.estimate, s2.reference, s2.z(), s3.estimate, s3.reference, s3.z(), rg.estimate,
                  rg.reference, rg.z());
    report(4, pass, "sampler diagnostics", buf, timer.secs());
}

// ---------------------------------------------------------------------------
// 5. n=2 exact small-X law (resolves the kappa X vs kappa X^2 discrepancy)
// ---------------------------------------------------------------------------

void criterion_5() {
    Timer timer;
    SplitDims d(2, 1);
    Window w = Window::projected_ball(d, NormTag::euclidean);
    OracleEstimate e = psi0(0.1, w, d, kEE, SamplerSpec::haar_exact2(), 100000, kSeed + 7);
    const double kap = kappa(d, kEE);
    const double linear = kap * 0.1, quadratic = kap * 0.01;
    const double est = 1.0 - e.value;
    const bool matches_linear = std::fabs(est - linear) <= 3.0 * e.stderr_;
    const bool excludes_quadratic = std::fabs(est - quadratic) > 3.0 * e.stderr_;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "1-Psi0(0.1) = %.6f +- %.6f; kappa X = %.6f (|z| = %.2f), kappa X^2 = %.6f excluded",
                  est, e.stderr_, linear, std::fabs(est - linear) / e.stderr_, quadratic);
    report(5, matches_linear && excludes_quadratic, "n=2 exact small-X law", buf, timer.secs());
}

// ---------------------------------------------------------------------------
// 6. small-X expansion for n=3, both splits
// ---------------------------------------------------------------------------

void criterion_6() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (int k : {1, 2}) {
        SplitDims d(3, k);
        Window w = Window::projected_ball(d, NormTag::euclidean);
        // push time 6 for both splits: the k=2 default 6/k = 3 is not mixed
        // enough for an event of probability ~2e-3 (ratio plateaus at ~0.44)
        SamplerSpec push = SamplerSpec::mixing_push(d, 6.0);
        const double X = 0.05;
        OracleEstimate e = psi0(X, w, d, kEE, push, 100000, kSeed + 8 + k);
        const double model = kappa(d, kEE) * std::pow(X, k);
        const double ratio = (1.0 - e.value) / model;
        pass = pass && ratio >= 0.85 && ratio <= 1.15;
        char buf[96];
        std::snprintf(buf, sizeof buf, "k=%d ratio %.3f (model %.2e)  ", k, ratio, model);
        detail += buf;
    }
    report(6, pass, "n=3 small-X expansion", detail + "[0.85, 1.15]", timer.secs());
}

// grid of strictly increasing empirical quantiles
std::vector<double> quantile_grid(const std::vector<double>& pooled_sorted, int count) {
    std::vector<double> g;
    for (int i = 1; i <= count; ++i) {
        const double q = static_cast<double>(i) / (count + 1);
        double v = pooled_sorted[static_cast<size_t>(q * (pooled_sorted.size() - 1))];
        if (!g.empty() && v <= g.back()) v = g.back() + 1e-9 * (1.0 + std::fabs(g.back()));
        g.push_back(v);
    }
    return g;
}

// ---------------------------------------------------------------------------
// 7. hitting time limit law (n=2, a.c. initial law)
// ---------------------------------------------------------------------------

void criterion_7() {
    Timer timer;
    SplitDims d(2, 1);
    Window w = Window::projected_ball(d, NormTag::euclidean);
    SamplerSpec ac;
    ac.kind = SamplerKind::ac_gaussian;
    ac.dims = d;

    std::vector<double> Ls{16.0, 64.0, 256.0};
    std::vector<EmpiricalDist> emps;
    double gmax = 0.0;
    for (size_t li = 0; li < Ls.size(); ++li) {
        const double L = Ls[li];
        std::vector<double> vals;
        long long censored = 0;
        for (long long i = 0; i < 5000; ++i) {
            RngStream rng(kSeed + 10 + li, static_cast<std::uint64_t>(i));
            Lattice x = sample(ac, rng);
            auto s = scaled_first_hit_statistic(x, w, L, kEE, 0.05 * L * L, 14);
            if (s)
                vals.push_back(*s);
            else
                ++censored;
        }
        emps.push_back(EmpiricalDist::from(std::move(vals), censored));
        gmax = std::max(gmax, emps.back().values.back());
    }
    // the scaled statistic has an X^{-1} tail, so evaluate on pooled
    // quantiles; the far tail is covered by an approximate endpoint whose
    // uncertainty is the survival mass beyond the last quantile
    std::vector<double> pooled;
    for (auto& e : emps) pooled.insert(pooled.end(), e.values.begin(), e.values.end());
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> grid = quantile_grid(pooled, 40);
    Psi0Curve curve =
        psi0_curve(grid, w, d, kEE, SamplerSpec::haar_exact2(), 100000, kSeed + 14);
    std::vector<OraclePoint> pts{{0.0, 0.0, 0.0}};
    for (size_t i = 0; i < curve.X.size(); ++i)
        pts.push_back(OraclePoint{curve.X[i], 1.0 - curve.avoid[i].value, curve.avoid[i].stderr_});
    pts.push_back(OraclePoint{gmax * 1.02 + 1e-6, 1.0, curve.avoid.back().value});

    std::vector<double> ks;
    bool dkw_last = false;
    double max_censor = 0.0;
    for (size_t li = 0; li < emps.size(); ++li) {
        CompareResult cr = compare(emps[li], pts);
        ks.push_back(cr.ks);
        if (li + 1 == emps.size()) dkw_last = cr.dkw_pass;
        max_censor = std::max(max_censor, emps[li].censoring_rate());
    }
    const bool decreasing = ks[0] > ks[1] && ks[1] > ks[2];
    char buf[160];
    std::snprintf(buf, sizeof buf, "KS(L=16,64,256) = %.4f > %.4f > %.4f; DKW at 256: %s; censor %.2e",
                  ks[0], ks[1], ks[2], dkw_last ? "pass" : "fail", max_censor);
    report(7, decreasing && dkw_last, "hitting time limit law", buf, timer.secs());
}

// ---------------------------------------------------------------------------
// 8. extreme value law (n=3, k=1 and 2)
// ---------------------------------------------------------------------------

void criterion_8() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (int k : {1, 2}) {
        SplitDims d(3, k);
        SamplerSpec push = SamplerSpec::mixing_push(d);
        const double T = 1000.0;
        std::vector<double> vals;
        long long censored = 0;
        for (long long i = 0; i < 2000; ++i) {
            RngStream rng(kSeed + 20 + k, static_cast<std::uint64_t>(i));
            Lattice x = sample(push, rng);
            try {
                vals.push_back(evl_statistic(x, T, kEE).rescaled);
            } catch (const EnumerationCapError&) {
                ++censored;
            }
        }
        EmpiricalDist emp = EmpiricalDist::from(std::move(vals), censored);
        // oracle on empirical quantiles; the lower tail of the rescaled
        // statistic costs exp((n/k)|Y|) enumeration work, so the range below
        // the first quantile is covered by an approximate endpoint
        std::vector<double> ys = quantile_grid(emp.values, 30);
        EtaTailCurve oracle = eta_tail_curve(ys, d, kEE, push, 40000, kSeed + 22 + k);
        std::vector<OraclePoint> pts;
        double max_oracle_stderr = 0.0;
        for (size_t i = 0; i < oracle.Y.size(); ++i) {
            pts.push_back(OraclePoint{oracle.Y[i], 1.0 - oracle.tail[i].value,
                                      oracle.tail[i].stderr_});
            max_oracle_stderr = std::max(max_oracle_stderr, oracle.tail[i].stderr_);
        }
        const double f_low = 1.0 - oracle.tail.front().value;
        pts.insert(pts.begin(), OraclePoint{emp.values.front() - 0.02, 0.0, std::max(f_low, 1e-3)});
        pts.push_back(OraclePoint{emp.values.back() + 0.02, 1.0,
                                  std::max(oracle.tail.back().value, 1e-3)});
        CompareResult cr = compare(emp, pts);
        const double limit = 0.05 + 3.0 * max_oracle_stderr;
        const bool ok = cr.ks <= limit && emp.censoring_rate() < 0.01;
        pass = pass && ok;
        char buf[128];
        std::snprintf(buf, sizeof buf, "k=%d KS %.4f <= %.4f censor %.2e  ", k, cr.ks, limit,
                      emp.censoring_rate());
        detail += buf;
    }
    report(8, pass, "extreme value law", detail, timer.secs());
}

// ---------------------------------------------------------------------------
// 9. tail exponents
// ---------------------------------------------------------------------------

void criterion_9() {
    Timer timer;
    // upper tail, n=2: log eta_tail(Y) vs Y has slope -n within 15%
    SplitDims d2(2, 1);
    EtaTailCurve up = eta_tail_curve({1.0, 1.25, 1.5, 1.75, 2.0}, d2, kEE,
                                     SamplerSpec::haar_exact2(), 200000, kSeed + 30);
    std::vector<double> ux, uy, us;
    for (size_t i = 0; i < up.Y.size(); ++i) {
        if (up.tail[i].value <= 0.0) continue;
        ux.push_back(up.Y[i]);
        uy.push_back(std::log(up.tail[i].value));
        us.push_back(up.tail[i].stderr_ / up.tail[i].value);
    }
    SlopeFit upper = fit_line(ux, uy, us);
    const bool upper_ok = std::fabs(upper.slope + 2.0) <= 0.15 * 2.0;

    // lower tail, n=3 k=2: log Psi0 vs log X has slope -(n-1) within 20%
    SplitDims d32(3, 2);
    Window w32 = Window::projected_ball(d32, NormTag::euclidean);
    SamplerSpec push32 = SamplerSpec::mixing_push(d32, 5.0);
    Psi0Curve low = psi0_curve({4.0, 8.0, 16.0}, w32, d32, kEE, push32, 60000, kSeed + 31);
    std::vector<double> lx, ly, ls;
    for (size_t i = 0; i < low.X.size(); ++i) {
        if (low.avoid[i].value <= 0.0) continue;
        lx.push_back(std::log(low.X[i]));
        ly.push_back(std::log(low.avoid[i].value));
        ls.push_back(low.avoid[i].stderr_ / low.avoid[i].value);
    }
    SlopeFit lower = fit_line(lx, ly, ls);
    const bool lower_ok = std::fabs(lower.slope + 2.0) <= 0.20 * 2.0;

    // rescaling identity at (R, S) = (2, 1), n=3, k=1, m=1
    SamplerSpec push31 = SamplerSpec::mixing_push(SplitDims(3, 1));
    OracleEstimate fa = fkm_probability(2.0, 1.0, 1, 1, push31, 100000, kSeed + 32);
    OracleEstimate fb = fkm_probability(fkm_rescaled_radius(1, 1, 2.0, 1.0), 1, 1, push31, 100000,
                                        kSeed + 33);
    const double sd = std::sqrt(fa.stderr_ * fa.stderr_ + fb.stderr_ * fb.stderr_);
    const double rz = sd > 0.0 ? (fa.value - fb.value) / sd : 0.0;
    const bool rescale_ok = std::fabs(rz) <= 3.0;

    // k=1, m>=1 log-factor surrogate: F(R) R^{n(n-1)/k} may not decrease
    // significantly over the fitted range (growth consistent with the log
    // factor; the asymptotic constants themselves are out of reach here)
    std::vector<double> Rs{1.0, 1.5, 2.0};
    std::vector<double> comp, comp_sd;
    for (size_t i = 0; i < Rs.size(); ++i) {
        OracleEstimate e = fkm_probability(Rs[i], 1, 1, push31, 60000, kSeed + 34 + i);
        const double f = std::pow(Rs[i], 6.0);
        comp.push_back(e.value * f);
        comp_sd.push_back(e.stderr_ * f);
    }
    bool growth_ok = true;
    for (size_t i = 0; i + 1 < comp.size(); ++i) {
        const double joint = 3.0 * std::sqrt(comp_sd[i] * comp_sd[i] + comp_sd[i + 1] * comp_sd[i + 1]);
        if (comp[i + 1] < comp[i] - joint) growth_ok = false;
    }

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "upper slope %.3f (want -2 +-15%%); lower slope %.3f (want -2 +-20%%); "
                  "rescale z %+0.2f; compensated F %.3f -> %.3f -> %.3f %s",
                  upper.slope, lower.slope, rz, comp[0], comp[1], comp[2],
                  growth_ok ? "nondecreasing" : "DECREASING");
    report(9, upper_ok && lower_ok && rescale_ok && growth_ok, "tail exponents", buf, timer.secs());
}

// ---------------------------------------------------------------------------
// 10. log-law diagnostic (soft)
// ---------------------------------------------------------------------------

void criterion_10() {
    Timer timer;
    SplitDims d(2, 1);
    std::vector<double> ratios;
    for (int i = 0; i < 200; ++i) {
        RngStream rng(kSeed + 40, static_cast<std::uint64_t>(i));
        Lattice x = sample(SamplerSpec::haar_exact2(), rng);
        ratios.push_back(sup_log_alpha(x, 1000.0, kEE).M / std::log(1000.0));
    }
    const double med = median(ratios);
    const bool inside = med >= 0.5 - 0.15 && med <= 0.5 + 0.15;
    char buf[96];
    std::snprintf(buf, sizeof buf, "median M_T/log T = %.3f, window [0.35, 0.65]", med);
    report(10, inside, "log-law diagnostic", buf, timer.secs(), /*soft=*/true);
}

}  // namespace

int main() {
    std::printf("latflow acceptance suite (seed %llu)\n", static_cast<unsigned long long>(kSeed));
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures)
        std::printf("%d criterion(s) FAILED\n", failures);
    else
        std::printf("all hard criteria passed\n");
    return failures;
}
