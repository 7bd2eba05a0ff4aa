#pragma once

#include <chrono>
#include <map>

#include <json.hpp>

#include "latflow/extremes.hpp"
#include "latflow/io.hpp"
#include "latflow/parallel.hpp"
#include "latflow/stats.hpp"

namespace latflow {

using nlohmann::json;

enum class ExperimentKind { diag, hits, joint_counts, impact, evl, oracle, tails, fkm, loglaw };

inline std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::diag: return "diag";
        case ExperimentKind::hits: return "hits";
        case ExperimentKind::joint_counts: return "joint-counts";
        case ExperimentKind::impact: return "impact";
        case ExperimentKind::evl: return "evl";
        case ExperimentKind::oracle: return "oracle";
        case ExperimentKind::tails: return "tails";
        case ExperimentKind::fkm: return "fkm";
        case ExperimentKind::loglaw: return "loglaw";
    }
    return "?";
}

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
    for (ExperimentKind k :
         {ExperimentKind::diag, ExperimentKind::hits, ExperimentKind::joint_counts,
          ExperimentKind::impact, ExperimentKind::evl, ExperimentKind::oracle,
          ExperimentKind::tails, ExperimentKind::fkm, ExperimentKind::loglaw})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown experiment kind: " + s);
}

inline std::string to_string(NormTag t) { return t == NormTag::euclidean ? "euclidean" : "sup"; }
inline NormTag norm_tag_from_string(const std::string& s) {
    if (s == "euclidean") return NormTag::euclidean;
    if (s == "sup") return NormTag::sup;
    throw std::invalid_argument("unknown norm tag: " + s);
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::diag;
    SplitDims dims;
    NormTag outer = NormTag::euclidean;
    NormTag inner = NormTag::euclidean;
    SamplerSpec sampler;

    // window: projected-ball by default, or an explicit box
    bool window_is_box = false;
    Vec window_lo, window_hi;

    std::vector<double> L_grid, T_grid, X_grid, Y_grid, R_grid;
    std::vector<double> joint_radii;
    std::vector<long long> joint_counts;
    Vec impact_sub_lo, impact_sub_hi;  // sub-window box for the impact kind
    double impact_X = 0.5;

    long long nsamples = 1000;
    long long oracle_nsamples = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "out";

    long long enum_node_cap = 10'000'000;
    double enum_predicted_cap = 50'000'000.0;
    double s_start = 1.0;
    int max_doublings = 12;

    NormPair norms() const { return NormPair(outer, inner); }
    Window window() const {
        if (window_is_box) return Window::box(dims, window_lo, window_hi);
        return Window::projected_ball(dims, outer);
    }
    EnumOptions enum_options() const { return EnumOptions{enum_node_cap, enum_predicted_cap}; }

    // The configured sampler is the initial law of the empirical side; limit
    // curves are Haar probabilities, so the oracle side always draws from a
    // near-Haar law (exact for n = 2, mixing push otherwise).
    SamplerSpec oracle_sampler() const {
        if (dims.n == 2) return SamplerSpec::haar_exact2();
        return SamplerSpec::mixing_push(dims, std::max(6.0, 6.0 / dims.k));
    }

    void validate() const {
        dims.validate();
        sampler.validate();
        if (sampler.dims != dims) throw std::invalid_argument("config: sampler dims mismatch");
        if (nsamples < 1 || oracle_nsamples < 1) throw std::invalid_argument("config: need samples");
        if (kind == ExperimentKind::joint_counts && joint_radii.size() != joint_counts.size())
            throw std::invalid_argument("config: joint radii/counts mismatch");
        if (window_is_box && (static_cast<int>(window_lo.size()) != dims.m + 1 ||
                              static_cast<int>(window_hi.size()) != dims.m + 1))
            throw std::invalid_argument("config: window box needs m+1 bounds");
        for (double L : L_grid)
            if (!(L > 0.0)) throw std::invalid_argument("config: L grid must be positive");
        if (kind == ExperimentKind::impact &&
            (impact_sub_lo.size() != impact_sub_hi.size() ||
             static_cast<int>(impact_sub_lo.size()) != dims.m + 1))
            throw std::invalid_argument("config: impact sub-window needs m+1 bounds");
    }
};

inline json to_json(const SamplerSpec& s) {
    json j;
    j["kind"] = to_string(s.kind);
    j["push_time"] = s.push_time;
    j["base"] = to_string(s.push_base);
    j["box_halfwidth"] = s.box_halfwidth;
    j["sigma"] = s.sigma;
    if (s.base_point) {
        json rows = json::array();
        for (int i = 0; i < s.base_point->n(); ++i) rows.push_back(s.base_point->basis.row(i));
        j["base_point"] = rows;
    }
    return j;
}

inline SamplerSpec sampler_from_json(const json& j, const SplitDims& dims) {
    SamplerSpec s;
    s.kind = sampler_kind_from_string(j.at("kind").get<std::string>());
    s.dims = dims;
    s.push_time = j.value("push_time", 0.0);
    s.push_base = sampler_kind_from_string(j.value("base", std::string("ac-gaussian")));
    s.box_halfwidth = j.value("box_halfwidth", 1.0);
    s.sigma = j.value("sigma", 0.3);
    if (j.contains("base_point")) {
        SquareMatrix b(dims.n);
        const json& rows = j.at("base_point");
        for (int i = 0; i < dims.n; ++i)
            for (int c = 0; c < dims.n; ++c) b(i, c) = rows.at(i).at(c).get<double>();
        s.base_point = make_lattice(dims, b);
    }
    return s;
}

inline json to_json(const ExperimentConfig& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["dims"] = {{"n", c.dims.n}, {"k", c.dims.k}};
    j["norms"] = {{"outer", to_string(c.outer)}, {"inner", to_string(c.inner)}};
    j["sampler"] = to_json(c.sampler);
    if (c.window_is_box)
        j["window"] = {{"shape", "box"}, {"lo", c.window_lo}, {"hi", c.window_hi}};
    else
        j["window"] = {{"shape", "projected-ball"}};
    json grids;
    grids["L"] = c.L_grid;
    grids["T"] = c.T_grid;
    grids["X"] = c.X_grid;
    grids["Y"] = c.Y_grid;
    grids["R"] = c.R_grid;
    j["grids"] = grids;
    if (!c.joint_radii.empty()) j["joint"] = {{"radii", c.joint_radii}, {"counts", c.joint_counts}};
    if (!c.impact_sub_lo.empty())
        j["impact"] = {{"sub_lo", c.impact_sub_lo}, {"sub_hi", c.impact_sub_hi}, {"X", c.impact_X}};
    j["nsamples"] = c.nsamples;
    j["oracle_nsamples"] = c.oracle_nsamples;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out"] = c.out_dir;
    j["caps"] = {{"enum_nodes", c.enum_node_cap}, {"predicted", c.enum_predicted_cap}};
    j["budget"] = {{"s_start", c.s_start}, {"max_doublings", c.max_doublings}};
    return j;
}

inline ExperimentConfig config_from_json(const json& j0) {
    // a run manifest embeds the config it was produced from; accept either
    const json& j = (j0.contains("config") && j0.contains("versions")) ? j0.at("config") : j0;
    ExperimentConfig c;
    c.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    const json& d = j.at("dims");
    c.dims = SplitDims(d.at("n").get<int>(), d.at("k").get<int>());
    if (j.contains("norms")) {
        c.outer = norm_tag_from_string(j["norms"].value("outer", std::string("euclidean")));
        c.inner = norm_tag_from_string(j["norms"].value("inner", std::string("euclidean")));
    }
    c.sampler = j.contains("sampler") ? sampler_from_json(j["sampler"], c.dims)
                                      : SamplerSpec::mixing_push(c.dims);
    if (j.contains("window") && j["window"].value("shape", std::string()) == "box") {
        c.window_is_box = true;
        c.window_lo = j["window"].at("lo").get<Vec>();
        c.window_hi = j["window"].at("hi").get<Vec>();
    }
    if (j.contains("grids")) {
        const json& g = j["grids"];
        c.L_grid = g.value("L", std::vector<double>{});
        c.T_grid = g.value("T", std::vector<double>{});
        c.X_grid = g.value("X", std::vector<double>{});
        c.Y_grid = g.value("Y", std::vector<double>{});
        c.R_grid = g.value("R", std::vector<double>{});
    }
    if (j.contains("joint")) {
        c.joint_radii = j["joint"].at("radii").get<std::vector<double>>();
        c.joint_counts = j["joint"].at("counts").get<std::vector<long long>>();
    }
    if (j.contains("impact")) {
        c.impact_sub_lo = j["impact"].at("sub_lo").get<Vec>();
        c.impact_sub_hi = j["impact"].at("sub_hi").get<Vec>();
        c.impact_X = j["impact"].value("X", 0.5);
    }
    c.nsamples = j.value("nsamples", 1000LL);
    c.oracle_nsamples = j.value("oracle_nsamples", 10000LL);
    c.seed = j.value("seed", 1ULL);
    c.threads = j.value("threads", 1);
    c.out_dir = j.value("out", std::string("out"));
    if (j.contains("caps")) {
        c.enum_node_cap = j["caps"].value("enum_nodes", 10'000'000LL);
        c.enum_predicted_cap = j["caps"].value("predicted", 50'000'000.0);
    }
    if (j.contains("budget")) {
        c.s_start = j["budget"].value("s_start", 1.0);
        c.max_doublings = j["budget"].value("max_doublings", 12);
    }
    c.validate();
    return c;
}

// --- runner ----------------------------------------------------------------

struct RunResult {
    std::vector<std::string> files;
    std::map<std::string, double> metrics;  // flat summary for programmatic checks
};

namespace detail {

struct Observation {
    json row;
    bool censored = false;
    double value = 0.0;
    Vec w;
    bool valid = false;
};

inline std::vector<OraclePoint> curve_to_points(const std::vector<double>& xs,
                                                const std::vector<OracleEstimate>& es,
                                                bool complement) {
    std::vector<OraclePoint> pts;
    for (size_t i = 0; i < xs.size(); ++i)
        pts.push_back(OraclePoint{xs[i], complement ? 1.0 - es[i].value : es[i].value,
                                  es[i].stderr_});
    return pts;
}

inline std::vector<double> spread_grid(double lo, double hi, int count) {
    std::vector<double> g;
    if (count < 2) count = 2;
    for (int i = 0; i < count; ++i) g.push_back(lo + (hi - lo) * i / (count - 1));
    return g;
}

// Strictly increasing grid of empirical quantiles; concentrates oracle work
// where the data lives (the scaled hitting statistic has a polynomial tail,
// so a uniform grid up to the sample maximum would be wasted on it).
inline std::vector<double> quantile_grid(std::vector<double> pooled, int count) {
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> g;
    for (int i = 1; i <= count; ++i) {
        const double q = static_cast<double>(i) / (count + 1);
        double v = pooled[static_cast<size_t>(q * (pooled.size() - 1))];
        if (!g.empty() && v <= g.back()) v = g.back() + 1e-9 * (1.0 + std::fabs(g.back()));
        g.push_back(v);
    }
    return g;
}

}  // namespace detail

class ExperimentRunner {
  public:
    explicit ExperimentRunner(ExperimentConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

    RunResult run() {
        const auto t0 = std::chrono::steady_clock::now();
        namespace fs = std::filesystem;
        fs::create_directories(cfg_.out_dir);
        result_ = RunResult{};

        switch (cfg_.kind) {
            case ExperimentKind::diag: run_diag(); break;
            case ExperimentKind::hits: run_hits(); break;
            case ExperimentKind::joint_counts: run_joint_counts(); break;
            case ExperimentKind::impact: run_impact(); break;
            case ExperimentKind::evl: run_evl(); break;
            case ExperimentKind::oracle: run_oracle(); break;
            case ExperimentKind::tails: run_tails(); break;
            case ExperimentKind::fkm: run_fkm(); break;
            case ExperimentKind::loglaw: run_loglaw(); break;
        }

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json manifest;
        manifest["config"] = to_json(cfg_);
        manifest["versions"] = {{"latflow", "0.1.0"},
                                {"compiler", __VERSION__},
                                {"json", NLOHMANN_JSON_VERSION_MAJOR}};
        manifest["seed"] = cfg_.seed;
        manifest["wall_time_sec"] = wall;
        manifest["outputs"] = result_.files;
        write_text("manifest.json", manifest.dump(2) + "\n");
        return result_;
    }

  private:
    ExperimentConfig cfg_;
    RunResult result_;

    std::filesystem::path out_path(const std::string& name) {
        return std::filesystem::path(cfg_.out_dir) / name;
    }
    void write_text(const std::string& name, const std::string& text) {
        std::ofstream out(out_path(name));
        if (!out) throw std::runtime_error("cannot open " + name);
        out << text;
        result_.files.push_back(name);
    }
    std::ofstream open_file(const std::string& name) {
        std::ofstream out(out_path(name));
        if (!out) throw std::runtime_error("cannot open " + name);
        result_.files.push_back(name);
        return out;
    }

    Lattice sample_at(std::uint64_t index) const {
        RngStream rng(cfg_.seed, index);
        return sample(cfg_.sampler, rng);
    }

    // -- diag ---------------------------------------------------------------

    void run_diag() {
        const int n = cfg_.dims.n;
        const double vol = detail::unit_ball_volume(n, NormTag::euclidean);
        Region ball = ball_region(Vec(n, 0.0), 1.0);
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"stat", "estimate", "stderr", "reference", "z"});
        Diagnostic s = siegel_mean_diagnostic(cfg_.sampler, ball, vol, cfg_.nsamples, cfg_.seed,
                                              cfg_.enum_options());
        csv.line({"siegel_mean", fmt_double(s.estimate), fmt_double(s.stderr_),
                  fmt_double(s.reference), fmt_double(s.z())});
        result_.metrics["siegel_z"] = s.z();
        result_.metrics["siegel_estimate"] = s.estimate;
        result_.metrics["siegel_reference"] = s.reference;
        if (n >= 3) {
            Diagnostic r = rogers_second_moment_diagnostic(cfg_.sampler, ball, vol, cfg_.nsamples,
                                                           cfg_.seed + 1, cfg_.enum_options());
            csv.line({"rogers_second_moment", fmt_double(r.estimate), fmt_double(r.stderr_),
                      fmt_double(r.reference), fmt_double(r.z())});
            result_.metrics["rogers_z"] = r.z();
        }
        // push-time trend for the mixing surrogate
        if (cfg_.sampler.kind == SamplerKind::haar_mixing_push) {
            for (double t : {0.0, 1.0, 2.0, 4.0, 6.0}) {
                SamplerSpec spec = cfg_.sampler;
                spec.push_time = t;
                Diagnostic dg = siegel_mean_diagnostic(spec, ball, vol, cfg_.nsamples, cfg_.seed,
                                                       cfg_.enum_options());
                csv.line({"siegel_push_t" + fmt_double(t), fmt_double(dg.estimate),
                          fmt_double(dg.stderr_), fmt_double(dg.reference), fmt_double(dg.z())});
            }
        }
    }

    // -- hits -----------------------------------------------------------------

    void run_hits() {
        if (cfg_.L_grid.empty()) throw std::invalid_argument("hits: need an L grid");
        Window w = cfg_.window();
        NormPair norms = cfg_.norms();
        auto jsonl = open_file("observations.jsonl");
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"L", "n_uncensored", "censoring_rate", "ks", "max_z", "dkw_eps", "dkw_pass"});

        SvgPlot plot("scaled first hitting time", "X", "P(stat <= X)");
        const char* colors[] = {"#b2521f", "#1f6fb2", "#3fa34d", "#8247b5"};
        int ci = 0;
        double gmax = 0.0;
        std::vector<std::pair<double, EmpiricalDist>> per_L;
        for (double L : cfg_.L_grid) {
            const double scale = std::pow(L, -static_cast<double>(cfg_.dims.n) / cfg_.dims.k);
            std::vector<detail::Observation> obs(cfg_.nsamples);
            parallel_for(cfg_.nsamples, cfg_.threads, [&](long long i) {
                Lattice x = sample_at(static_cast<std::uint64_t>(i));
                detail::Observation o;
                try {
                    FirstHit fh = first_hit(x, w, L, norms, cfg_.s_start * std::pow(L, 2.0),
                                            cfg_.max_doublings, cfg_.enum_options());
                    if (fh.censored()) {
                        o.censored = true;
                    } else {
                        o.value = scale * fh.record->snorm;
                        o.valid = true;
                        o.row = json{{"L", L},
                                     {"s", fh.record->s},
                                     {"snorm", fh.record->snorm},
                                     {"w", fh.record->w},
                                     {"witness", fh.record->witness},
                                     {"scaled", o.value}};
                    }
                } catch (const EnumerationCapError&) {
                    o.censored = true;
                }
                obs[i] = std::move(o);
            });
            std::vector<double> vals;
            long long censored = 0;
            for (auto& o : obs) {
                if (o.censored) {
                    ++censored;
                    jsonl << json{{"L", L}, {"censored", true}}.dump() << "\n";
                    continue;
                }
                vals.push_back(o.value);
                jsonl << o.row.dump() << "\n";
            }
            per_L.emplace_back(L, EmpiricalDist::from(std::move(vals), censored));
            gmax = std::max(gmax, per_L.back().second.values.back());
        }
        // one oracle curve at L = 1 serves every L in the grid
        std::vector<double> grid = cfg_.X_grid;
        if (grid.empty()) {
            std::vector<double> pooled;
            for (auto& [L, emp] : per_L)
                pooled.insert(pooled.end(), emp.values.begin(), emp.values.end());
            grid = detail::quantile_grid(std::move(pooled), 30);
        }
        Psi0Curve oracle = psi0_curve(grid, w, cfg_.dims, norms, cfg_.oracle_sampler(),
                                      cfg_.oracle_nsamples, cfg_.seed + 777, cfg_.enum_options());
        auto pts = detail::curve_to_points(oracle.X, oracle.avoid, /*complement=*/true);
        // coverage endpoints: exact zero on the left, the survival mass past
        // the last grid point as uncertainty on the right
        pts.insert(pts.begin(), OraclePoint{0.0, 0.0, 0.0});
        if (pts.back().x < gmax)
            pts.push_back(OraclePoint{gmax * 1.02 + 1e-9, 1.0, oracle.avoid.back().value});

        std::vector<double> ox, oy;
        for (auto& p : pts) {
            ox.push_back(p.x);
            oy.push_back(p.value);
        }
        plot.add(SvgSeries{ox, oy, "#222222", false, false, "limit law"});
        for (auto& [L, emp] : per_L) {
            CompareResult cr = compare(emp, pts);
            csv.row({L, static_cast<double>(emp.n()), emp.censoring_rate(), cr.ks, cr.max_z,
                     cr.dkw_eps, cr.dkw_pass ? 1.0 : 0.0});
            result_.metrics["ks_L" + fmt_double(L)] = cr.ks;
            result_.metrics["dkw_pass_L" + fmt_double(L)] = cr.dkw_pass ? 1.0 : 0.0;
            result_.metrics["censoring_L" + fmt_double(L)] = emp.censoring_rate();
            std::vector<double> ex{0.0}, ey{0.0};
            for (size_t i = 0; i < emp.values.size(); ++i) {
                ex.push_back(emp.values[i]);
                ey.push_back(static_cast<double>(i + 1) / emp.n());
            }
            plot.add(SvgSeries{ex, ey, colors[ci++ % 4], true, false, "L=" + fmt_double(L)});
        }
        plot.write(out_path("ecdf.svg"));
        result_.files.push_back("ecdf.svg");
    }

    // -- joint counts ---------------------------------------------------------

    void run_joint_counts() {
        if (cfg_.L_grid.empty()) throw std::invalid_argument("joint-counts: need an L grid");
        Window w = cfg_.window();
        NormPair norms = cfg_.norms();
        OracleEstimate oracle =
            psi_N_oracle(cfg_.joint_radii, cfg_.joint_counts, w, cfg_.dims, norms,
                         cfg_.oracle_sampler(), cfg_.oracle_nsamples, cfg_.seed + 777,
                         cfg_.enum_options());
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"L", "frequency", "stderr", "oracle", "oracle_stderr", "z"});
        for (double L : cfg_.L_grid) {
            std::vector<int> hits(cfg_.nsamples, -1);
            parallel_for(cfg_.nsamples, cfg_.threads, [&](long long i) {
                Lattice x = sample_at(static_cast<std::uint64_t>(i));
                try {
                    hits[i] = joint_count_event(x, cfg_.joint_radii, cfg_.joint_counts, w, L,
                                                norms, cfg_.enum_options())
                                  ? 1
                                  : 0;
                } catch (const EnumerationCapError&) {
                }
            });
            long long yes = 0, used = 0;
            for (int h : hits)
                if (h >= 0) {
                    ++used;
                    yes += h;
                }
            OracleEstimate emp = frequency_estimate(yes, used, "joint event");
            const double sd = std::sqrt(emp.stderr_ * emp.stderr_ + oracle.stderr_ * oracle.stderr_);
            const double z = sd > 0.0 ? (emp.value - oracle.value) / sd : 0.0;
            csv.row({L, emp.value, emp.stderr_, oracle.value, oracle.stderr_, z});
            result_.metrics["z_L" + fmt_double(L)] = z;
        }
    }

    // -- impact ---------------------------------------------------------------

    void run_impact() {
        if (cfg_.L_grid.empty()) throw std::invalid_argument("impact: need an L grid");
        Window w = cfg_.window();
        NormPair norms = cfg_.norms();
        auto sub = [lo = cfg_.impact_sub_lo, hi = cfg_.impact_sub_hi](const Vec& v) {
            for (size_t i = 0; i < lo.size(); ++i)
                if (v[i] < lo[i] - 1e-12 || v[i] > hi[i] + 1e-12) return false;
            return true;
        };
        // oracle: the same joint event evaluated at L = 1 over the near-Haar law
        long long yes = 0, used = 0;
        for (long long i = 0; i < cfg_.oracle_nsamples; ++i) {
            RngStream rng(cfg_.seed + 777, static_cast<std::uint64_t>(i));
            Lattice x = sample(cfg_.oracle_sampler(), rng);
            try {
                auto ev = impact_marginal_event(x, w, 1.0, cfg_.impact_X, sub, norms, cfg_.s_start,
                                                cfg_.max_doublings, cfg_.enum_options());
                if (ev.value) {
                    ++used;
                    if (*ev.value) ++yes;
                }
            } catch (const EnumerationCapError&) {
            }
        }
        OracleEstimate oracle = frequency_estimate(yes, used, "impact event L=1");

        auto jsonl = open_file("observations.jsonl");
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"L", "frequency", "stderr", "oracle", "oracle_stderr", "z", "censoring_rate"});
        for (double L : cfg_.L_grid) {
            std::vector<int> flag(cfg_.nsamples, -1);
            std::vector<json> rows(cfg_.nsamples);
            parallel_for(cfg_.nsamples, cfg_.threads, [&](long long i) {
                Lattice x = sample_at(static_cast<std::uint64_t>(i));
                try {
                    auto ev = impact_marginal_event(x, w, L, cfg_.impact_X, sub, norms,
                                                    cfg_.s_start * std::pow(L, 2.0),
                                                    cfg_.max_doublings, cfg_.enum_options());
                    if (ev.value) {
                        flag[i] = *ev.value ? 1 : 0;
                        rows[i] = json{{"L", L},
                                       {"event", *ev.value},
                                       {"snorm", ev.record->snorm},
                                       {"w", ev.record->w}};
                    }
                } catch (const EnumerationCapError&) {
                }
            });
            long long eyes = 0, eused = 0;
            for (long long i = 0; i < cfg_.nsamples; ++i) {
                if (flag[i] < 0) {
                    jsonl << json{{"L", L}, {"censored", true}}.dump() << "\n";
                    continue;
                }
                jsonl << rows[i].dump() << "\n";
                ++eused;
                eyes += flag[i];
            }
            OracleEstimate emp = frequency_estimate(eyes, eused, "impact event");
            const double sd = std::sqrt(emp.stderr_ * emp.stderr_ + oracle.stderr_ * oracle.stderr_);
            const double z = sd > 0.0 ? (emp.value - oracle.value) / sd : 0.0;
            const double crate = 1.0 - static_cast<double>(eused) / cfg_.nsamples;
            csv.row({L, emp.value, emp.stderr_, oracle.value, oracle.stderr_, z, crate});
            result_.metrics["z_L" + fmt_double(L)] = z;
        }
    }

    // -- evl --------------------------------------------------------------------

    void run_evl() {
        if (cfg_.T_grid.empty()) throw std::invalid_argument("evl: need a T grid");
        NormPair norms = cfg_.norms();
        auto jsonl = open_file("observations.jsonl");
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"T", "n_uncensored", "censoring_rate", "ks", "max_z", "dkw_eps", "dkw_pass"});
        SvgPlot plot("rescaled sup log alpha", "Y", "P(stat <= Y)");
        const char* colors[] = {"#b2521f", "#1f6fb2", "#3fa34d", "#8247b5"};
        int ci = 0;

        std::vector<std::pair<double, EmpiricalDist>> per_T;
        double ymin = 1e300, ymax = -1e300;
        for (double T : cfg_.T_grid) {
            std::vector<detail::Observation> obs(cfg_.nsamples);
            parallel_for(cfg_.nsamples, cfg_.threads, [&](long long i) {
                Lattice x = sample_at(static_cast<std::uint64_t>(i));
                detail::Observation o;
                try {
                    EvlObservation e = evl_statistic(x, T, norms, cfg_.enum_options());
                    o.valid = true;
                    o.value = e.rescaled;
                    o.row = json{{"T", T}, {"M", e.M}, {"rescaled", e.rescaled}, {"censored", false}};
                } catch (const EnumerationCapError&) {
                    o.censored = true;
                }
                obs[i] = std::move(o);
            });
            std::vector<double> vals;
            long long censored = 0;
            for (auto& o : obs) {
                if (!o.valid) {
                    ++censored;
                    jsonl << json{{"T", T}, {"censored", true}}.dump() << "\n";
                    continue;
                }
                vals.push_back(o.value);
                jsonl << o.row.dump() << "\n";
            }
            per_T.emplace_back(T, EmpiricalDist::from(std::move(vals), censored));
            ymin = std::min(ymin, per_T.back().second.values.front());
            ymax = std::max(ymax, per_T.back().second.values.back());
        }
        std::vector<double> ys = cfg_.Y_grid;
        if (ys.empty()) {
            std::vector<double> pooled;
            for (auto& [T, emp] : per_T)
                pooled.insert(pooled.end(), emp.values.begin(), emp.values.end());
            ys = detail::quantile_grid(std::move(pooled), 25);
        }
        EtaTailCurve oracle = eta_tail_curve(ys, cfg_.dims, norms, cfg_.oracle_sampler(),
                                             cfg_.oracle_nsamples, cfg_.seed + 777,
                                             cfg_.enum_options());
        std::vector<OraclePoint> pts;
        for (size_t i = 0; i < oracle.Y.size(); ++i)
            pts.push_back(OraclePoint{oracle.Y[i], 1.0 - oracle.tail[i].value,
                                      oracle.tail[i].stderr_});
        if (pts.front().x > ymin)
            pts.insert(pts.begin(), OraclePoint{ymin - 0.02, 0.0,
                                                std::max(1.0 - oracle.tail.front().value, 1e-3)});
        if (pts.back().x < ymax)
            pts.push_back(OraclePoint{ymax + 0.02, 1.0,
                                      std::max(oracle.tail.back().value, 1e-3)});
        std::vector<double> ox, oy;
        for (auto& p : pts) {
            ox.push_back(p.x);
            oy.push_back(p.value);
        }
        plot.add(SvgSeries{ox, oy, "#222222", false, false, "limit law"});
        for (auto& [T, emp] : per_T) {
            CompareResult cr = compare(emp, pts);
            csv.row({T, static_cast<double>(emp.n()), emp.censoring_rate(), cr.ks, cr.max_z,
                     cr.dkw_eps, cr.dkw_pass ? 1.0 : 0.0});
            result_.metrics["ks_T" + fmt_double(T)] = cr.ks;
            result_.metrics["dkw_pass_T" + fmt_double(T)] = cr.dkw_pass ? 1.0 : 0.0;
            result_.metrics["censoring_T" + fmt_double(T)] = emp.censoring_rate();
            std::vector<double> ex{ymin - 0.02}, ey{0.0};
            for (size_t i = 0; i < emp.values.size(); ++i) {
                ex.push_back(emp.values[i]);
                ey.push_back(static_cast<double>(i + 1) / emp.n());
            }
            plot.add(SvgSeries{ex, ey, colors[ci++ % 4], true, false, "T=" + fmt_double(T)});
        }
        plot.write(out_path("ecdf.svg"));
        result_.files.push_back("ecdf.svg");
    }

    // -- oracle -----------------------------------------------------------------

    void run_oracle() {
        Window w = cfg_.window();
        NormPair norms = cfg_.norms();
        std::vector<double> xs = cfg_.X_grid;
        if (xs.empty()) xs = detail::spread_grid(0.05, 2.0, 20);
        Psi0Curve curve = psi0_curve(xs, w, cfg_.dims, norms, cfg_.sampler, cfg_.oracle_nsamples,
                                     cfg_.seed, cfg_.enum_options());
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"X", "psi0", "stderr"});
        std::vector<double> px, py;
        for (size_t i = 0; i < curve.X.size(); ++i) {
            csv.row({curve.X[i], curve.avoid[i].value, curve.avoid[i].stderr_});
            px.push_back(curve.X[i]);
            py.push_back(curve.avoid[i].value);
        }
        result_.metrics["censored"] = static_cast<double>(curve.censored);
        SvgPlot plot("first hit survival", "X", "Psi0(B_X)");
        plot.add(SvgSeries{px, py, "#1f6fb2", false, false, "Psi0"});
        plot.write(out_path("psi0.svg"));
        result_.files.push_back("psi0.svg");
    }

    // -- tails --------------------------------------------------------------------

    void run_tails() {
        NormPair norms = cfg_.norms();
        std::vector<double> xs = cfg_.X_grid.empty() ? std::vector<double>{0.05, 0.1} : cfg_.X_grid;
        std::vector<double> xl = cfg_.R_grid.empty() ? std::vector<double>{4.0, 8.0, 16.0} : cfg_.R_grid;
        TailReport rep = tail_report(cfg_.dims, norms, xs, xl, cfg_.sampler, cfg_.oracle_nsamples,
                                     cfg_.seed, cfg_.enum_options());
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"regime", "X", "value", "stderr", "model", "ratio"});
        for (auto& r : rep.small_rows) {
            csv.line({"small", fmt_double(r.X), fmt_double(r.value), fmt_double(r.stderr_),
                      fmt_double(r.model), fmt_double(r.ratio)});
        }
        for (auto& r : rep.large_rows)
            csv.line({"large", fmt_double(r.X), fmt_double(r.value), fmt_double(r.stderr_), "", ""});
        csv.line({"fit", "", fmt_double(rep.large_fit.slope), fmt_double(rep.large_fit.slope_stderr),
                  "", ""});
        result_.metrics["kappa"] = rep.kappa_value;
        result_.metrics["large_slope"] = rep.large_fit.slope;
        result_.metrics["large_slope_stderr"] = rep.large_fit.slope_stderr;
        for (auto& r : rep.small_rows) result_.metrics["ratio_X" + fmt_double(r.X)] = r.ratio;

        std::vector<double> lx, ly;
        for (auto& r : rep.large_rows)
            if (r.value > 0) {
                lx.push_back(std::log(r.X));
                ly.push_back(std::log(r.value));
            }
        SvgPlot plot("survival tail", "log X", "log Psi0");
        plot.add(SvgSeries{lx, ly, "#b2521f", false, true, "MC"});
        if (lx.size() >= 2) {
            std::vector<double> fx{lx.front(), lx.back()};
            std::vector<double> fy{rep.large_fit.intercept + rep.large_fit.slope * lx.front(),
                                   rep.large_fit.intercept + rep.large_fit.slope * lx.back()};
            plot.add(SvgSeries{fx, fy, "#222222", false, false, "fit"});
        }
        plot.write(out_path("tails.svg"));
        result_.files.push_back("tails.svg");
    }

    // -- fkm -----------------------------------------------------------------------

    void run_fkm() {
        std::vector<double> rs = cfg_.R_grid.empty() ? std::vector<double>{1.0, 1.5, 2.0} : cfg_.R_grid;
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"R", "F", "stderr", "compensated"});
        const int k = cfg_.dims.k, m = cfg_.dims.m;
        const double expo = static_cast<double>(cfg_.dims.n) * (cfg_.dims.n - 1) / k;
        std::vector<double> lr, lf, ls;
        for (double R : rs) {
            OracleEstimate e = fkm_probability(R, k, m, cfg_.sampler, cfg_.oracle_nsamples,
                                               cfg_.seed, cfg_.enum_options());
            const double comp = e.value * std::pow(R, expo);
            csv.row({R, e.value, e.stderr_, comp});
            result_.metrics["F_R" + fmt_double(R)] = e.value;
            result_.metrics["Fcomp_R" + fmt_double(R)] = comp;
            result_.metrics["Fstderr_R" + fmt_double(R)] = e.stderr_;
            if (e.value > 0.0) {
                lr.push_back(std::log(R));
                lf.push_back(std::log(e.value));
                ls.push_back(e.stderr_ / e.value);
            }
        }
        if (lr.size() >= 2) {
            SlopeFit fit = fit_line(lr, lf, ls);
            csv.line({"slope", fmt_double(fit.slope), fmt_double(fit.slope_stderr), ""});
            result_.metrics["slope"] = fit.slope;
            result_.metrics["slope_stderr"] = fit.slope_stderr;
        }
        // rescaling identity at (R, S) = (first grid value, 1)
        const double R0 = rs.front();
        OracleEstimate a = fkm_probability(R0, 1.0, k, m, cfg_.sampler, cfg_.oracle_nsamples,
                                           cfg_.seed + 1, cfg_.enum_options());
        OracleEstimate b = fkm_probability(fkm_rescaled_radius(k, m, R0, 1.0), k, m, cfg_.sampler,
                                           cfg_.oracle_nsamples, cfg_.seed + 2, cfg_.enum_options());
        const double sd = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
        const double z = sd > 0.0 ? (a.value - b.value) / sd : 0.0;
        csv.line({"rescale_z", fmt_double(z), "", ""});
        result_.metrics["rescale_z"] = z;
    }

    // -- loglaw -----------------------------------------------------------------------

    void run_loglaw() {
        if (cfg_.T_grid.empty()) throw std::invalid_argument("loglaw: need a T grid");
        NormPair norms = cfg_.norms();
        auto jsonl = open_file("observations.jsonl");
        std::vector<std::vector<double>> ratios(cfg_.nsamples);
        parallel_for(cfg_.nsamples, cfg_.threads, [&](long long i) {
            Lattice x = sample_at(static_cast<std::uint64_t>(i));
            ratios[i] = loglaw_track(x, cfg_.T_grid, norms, cfg_.enum_options());
        });
        for (long long i = 0; i < cfg_.nsamples; ++i)
            jsonl << json{{"sample", i}, {"ratios", ratios[i]}}.dump() << "\n";
        CsvWriter csv(out_path("summary.csv"));
        result_.files.push_back("summary.csv");
        csv.header({"T", "median_ratio", "mean_ratio"});
        for (size_t j = 0; j < cfg_.T_grid.size(); ++j) {
            std::vector<double> col;
            double mean = 0.0;
            for (auto& r : ratios) {
                col.push_back(r[j]);
                mean += r[j];
            }
            mean /= col.size();
            const double med = median(col);
            csv.row({cfg_.T_grid[j], med, mean});
            result_.metrics["median_T" + fmt_double(cfg_.T_grid[j])] = med;
        }
    }
};

inline RunResult run(const ExperimentConfig& cfg) { return ExperimentRunner(cfg).run(); }

// Render a human-readable summary from an existing result directory without
// recomputation.
inline std::string render_report(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ostringstream md;
    std::ifstream mf(fs::path(dir) / "manifest.json");
    if (!mf) throw std::runtime_error("report: no manifest.json in " + dir);
    json manifest = json::parse(mf);
    md << "# latflow run report\n\n";
    md << "- kind: " << manifest["config"]["kind"].get<std::string>() << "\n";
    md << "- dims: n=" << manifest["config"]["dims"]["n"] << " k=" << manifest["config"]["dims"]["k"]
       << "\n";
    md << "- seed: " << manifest["seed"] << "\n";
    md << "- wall time: " << manifest["wall_time_sec"] << " s\n\n";
    std::ifstream csv(fs::path(dir) / "summary.csv");
    if (csv) {
        md << "## summary\n\n";
        std::string line;
        bool first = true;
        while (std::getline(csv, line)) {
            std::string row = "| ";
            for (char c : line) row += c == ',' ? std::string(" | ") : std::string(1, c);
            row += " |";
            md << row << "\n";
            if (first) {
                first = false;
                size_t cols = std::count(line.begin(), line.end(), ',') + 1;
                md << "|";
                for (size_t i = 0; i < cols; ++i) md << " --- |";
                md << "\n";
            }
        }
        md << "\n";
    }
    md << "## files\n\n";
    for (const auto& f : manifest["outputs"]) md << "- " << f.get<std::string>() << "\n";
    return md.str();
}

}  // namespace latflow
