// Command line front end: seeded, reproducible experiment runs driven by a
// JSON config or by quick flags, plus a lattice sampler and a report
// renderer.  Statistical verdicts are report content, not exit codes; the
// process fails only on hard errors.

#include <CLI11.hpp>
#include <iostream>

#include <latflow/experiment.hpp>

using namespace latflow;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    int n = 0, k = 0;
    std::string sampler_kind;
    double push_time = -1.0;
    long long nsamples = 0, oracle_nsamples = 0;
    std::vector<double> L, T, X, Y, R;
    std::string outer, inner;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "JSON experiment config");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--seed", a.seed, "master seed")->each([&](const std::string&) { a.seed_set = true; });
    cmd->add_option("--threads", a.threads, "worker threads (0 = single)");
    cmd->add_option("-n,--n", a.n, "ambient dimension n");
    cmd->add_option("-k,--k", a.k, "action rank k");
    cmd->add_option("--sampler", a.sampler_kind,
                    "haar-exact-n2 | haar-mixing-push | horospherical | ac-gaussian");
    cmd->add_option("--push-time", a.push_time, "mixing push time (default 6/k)");
    cmd->add_option("--nsamples", a.nsamples, "empirical sample count");
    cmd->add_option("--oracle-nsamples", a.oracle_nsamples, "oracle sample count");
    cmd->add_option("--L", a.L, "L grid")->delimiter(',');
    cmd->add_option("--T", a.T, "T grid")->delimiter(',');
    cmd->add_option("--X", a.X, "X grid")->delimiter(',');
    cmd->add_option("--Y", a.Y, "Y grid")->delimiter(',');
    cmd->add_option("--R", a.R, "R grid")->delimiter(',');
    cmd->add_option("--outer", a.outer, "outer norm: euclidean | sup");
    cmd->add_option("--inner", a.inner, "inner norm: euclidean | sup");
}

ExperimentConfig build_config(const CommonArgs& a, ExperimentKind kind) {
    ExperimentConfig cfg;
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw std::runtime_error("cannot read config " + a.config_path);
        cfg = config_from_json(json::parse(in));
    } else {
        cfg.dims = SplitDims(a.n > 0 ? a.n : 2, a.k > 0 ? a.k : 1);
        cfg.sampler = cfg.dims.n == 2 ? SamplerSpec::haar_exact2()
                                      : SamplerSpec::mixing_push(cfg.dims);
    }
    cfg.kind = kind;
    if (a.n > 0) {
        cfg.dims = SplitDims(a.n, a.k > 0 ? a.k : 1);
        cfg.sampler.dims = cfg.dims;
    }
    if (!a.sampler_kind.empty()) {
        cfg.sampler.kind = sampler_kind_from_string(a.sampler_kind);
        if (cfg.sampler.kind == SamplerKind::haar_mixing_push && cfg.sampler.push_time <= 0.0)
            cfg.sampler.push_time = 6.0 / cfg.dims.k;
    }
    if (a.push_time >= 0.0) cfg.sampler.push_time = a.push_time;
    if (!a.outer.empty()) cfg.outer = norm_tag_from_string(a.outer);
    if (!a.inner.empty()) cfg.inner = norm_tag_from_string(a.inner);
    if (a.seed_set) cfg.seed = a.seed;
    if (a.threads > 0) cfg.threads = a.threads;
    if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
    if (a.nsamples > 0) cfg.nsamples = a.nsamples;
    if (a.oracle_nsamples > 0) cfg.oracle_nsamples = a.oracle_nsamples;
    if (!a.L.empty()) cfg.L_grid = a.L;
    if (!a.T.empty()) cfg.T_grid = a.T;
    if (!a.X.empty()) cfg.X_grid = a.X;
    if (!a.Y.empty()) cfg.Y_grid = a.Y;
    if (!a.R.empty()) cfg.R_grid = a.R;
    cfg.validate();
    return cfg;
}

int run_kind(const CommonArgs& a, ExperimentKind kind) {
    ExperimentConfig cfg = build_config(a, kind);
    RunResult r = run(cfg);
    std::cout << "wrote " << cfg.out_dir << " (" << r.files.size() << " files)\n";
    for (const auto& [key, value] : r.metrics) std::cout << "  " << key << " = " << value << "\n";
    return 0;
}

int run_sample(const CommonArgs& a, long long count) {
    ExperimentConfig cfg = build_config(a, ExperimentKind::diag);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.out_dir.empty() && !a.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        file.open(std::filesystem::path(cfg.out_dir) / "samples.jsonl");
        os = &file;
    }
    for (long long i = 0; i < count; ++i) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
        Lattice x = sample(cfg.sampler, rng);
        json rows = json::array();
        for (int r = 0; r < x.n(); ++r) rows.push_back(x.basis.row(r));
        (*os) << json{{"index", i}, {"basis", rows}}.dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latflow: hitting times, cusp excursions and limit laws for shear actions on "
                 "the space of unimodular lattices"};
    app.require_subcommand(1);

    std::map<std::string, ExperimentKind> kinds = {
        {"diag", ExperimentKind::diag},     {"hits", ExperimentKind::hits},
        {"evl", ExperimentKind::evl},       {"oracle", ExperimentKind::oracle},
        {"tails", ExperimentKind::tails},   {"fkm", ExperimentKind::fkm},
    };
    std::map<std::string, std::string> help = {
        {"diag", "sampler moment diagnostics (Siegel / Rogers z-scores)"},
        {"hits", "first hitting time law vs the limit oracle"},
        {"evl", "extreme value statistic vs the limit oracle"},
        {"oracle", "stand-alone survival curve Psi0"},
        {"tails", "small/large X tail report"},
        {"fkm", "cone avoidance probabilities and rescaling"},
    };

    std::vector<std::pair<ExperimentKind, CommonArgs*>> runs;
    std::vector<std::unique_ptr<CommonArgs>> storage;
    for (auto& [name, kind] : kinds) {
        auto* cmd = app.add_subcommand(name, help[name]);
        storage.push_back(std::make_unique<CommonArgs>());
        CommonArgs* a = storage.back().get();
        add_common(cmd, *a);
        ExperimentKind kk = kind;
        cmd->callback([a, kk]() { run_kind(*a, kk); });
    }

    // sample: emit lattices as JSONL
    auto sample_args = std::make_unique<CommonArgs>();
    long long sample_count = 10;
    {
        auto* cmd = app.add_subcommand("sample", "draw lattices and emit them as JSONL");
        add_common(cmd, *sample_args);
        cmd->add_option("--count", sample_count, "number of lattices");
        CommonArgs* a = sample_args.get();
        cmd->callback([a, &sample_count]() { run_sample(*a, sample_count); });
    }

    // report: render markdown from an existing run directory
    std::string report_dir;
    {
        auto* cmd = app.add_subcommand("report", "render a markdown summary of an existing run");
        cmd->add_option("dir", report_dir, "result directory")->required();
        cmd->callback([&report_dir]() {
            const std::string md = render_report(report_dir);
            std::ofstream out(std::filesystem::path(report_dir) / "report.md");
            out << md;
            std::cout << md;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
