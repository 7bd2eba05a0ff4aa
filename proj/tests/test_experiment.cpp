#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <latflow/experiment.hpp>

using namespace latflow;

namespace {

ExperimentConfig small_hits_config(const std::string& out) {
    ExperimentConfig c;
    c.kind = ExperimentKind::hits;
    c.dims = SplitDims(2, 1);
    c.sampler.kind = SamplerKind::ac_gaussian;
    c.sampler.dims = c.dims;
    c.L_grid = {8.0};
    c.nsamples = 400;
    c.oracle_nsamples = 2000;
    c.seed = 5;
    c.out_dir = out;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config round trip is lossless") {
    ExperimentConfig c;
    c.kind = ExperimentKind::evl;
    c.dims = SplitDims(3, 2);
    c.outer = NormTag::sup;
    c.inner = NormTag::euclidean;
    c.sampler = SamplerSpec::mixing_push(c.dims, 2.5, SamplerKind::horospherical);
    c.sampler.box_halfwidth = 0.7;
    c.window_is_box = true;
    c.window_lo = Vec{0.0};
    c.window_hi = Vec{1.5};
    c.L_grid = {2.0, 4.0};
    c.T_grid = {10.0, 100.0};
    c.X_grid = {0.1};
    c.Y_grid = {-1.0, 0.0, 1.0};
    c.R_grid = {1.0, 2.0};
    c.joint_radii = {0.5};
    c.joint_counts = {1};
    c.impact_sub_lo = Vec{0.0};
    c.impact_sub_hi = Vec{0.5};
    c.impact_X = 0.25;
    c.nsamples = 123;
    c.oracle_nsamples = 456;
    c.seed = 987654321;
    c.threads = 3;
    c.out_dir = "somewhere";
    c.enum_node_cap = 1234567;
    c.enum_predicted_cap = 7654321.0;
    c.s_start = 0.25;
    c.max_doublings = 9;

    json j = to_json(c);
    ExperimentConfig d = config_from_json(j);
    CHECK(to_json(d) == j);
    CHECK(d.kind == c.kind);
    CHECK(d.dims == c.dims);
    CHECK(d.sampler.push_time == c.sampler.push_time);
    CHECK(d.window_hi == c.window_hi);
    CHECK(d.seed == c.seed);

    // validation refuses inconsistent kind/dims combinations
    json bad = j;
    bad["sampler"]["kind"] = "haar-exact-n2";
    CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
    json bad2 = j;
    bad2["joint"]["counts"] = std::vector<long long>{1, 2};
    bad2["kind"] = "joint-counts";
    CHECK_THROWS_AS(config_from_json(bad2), std::invalid_argument);
}

TEST_CASE("runs are reproducible byte for byte, including from the manifest") {
    namespace fs = std::filesystem;
    const std::string out1 = "/tmp/latflow_test_run1", out2 = "/tmp/latflow_test_run2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    ExperimentConfig c1 = small_hits_config(out1);
    ExperimentConfig c2 = small_hits_config(out2);
    RunResult r1 = run(c1);
    RunResult r2 = run(c2);
    CHECK(slurp(fs::path(out1) / "observations.jsonl") == slurp(fs::path(out2) / "observations.jsonl"));
    CHECK(slurp(fs::path(out1) / "summary.csv") == slurp(fs::path(out2) / "summary.csv"));
    CHECK(slurp(fs::path(out1) / "ecdf.svg") == slurp(fs::path(out2) / "ecdf.svg"));
    CHECK(r1.metrics.at("ks_L8") == r2.metrics.at("ks_L8"));
    CHECK(fs::exists(fs::path(out1) / "manifest.json"));

    // a finished run's manifest is itself a valid config and reproduces the
    // numerical outputs bit for bit
    const std::string out3 = "/tmp/latflow_test_run3";
    fs::remove_all(out3);
    ExperimentConfig c3 = config_from_json(json::parse(slurp(fs::path(out1) / "manifest.json")));
    c3.out_dir = out3;
    run(c3);
    CHECK(slurp(fs::path(out1) / "observations.jsonl") == slurp(fs::path(out3) / "observations.jsonl"));
    CHECK(slurp(fs::path(out1) / "summary.csv") == slurp(fs::path(out3) / "summary.csv"));
}

TEST_CASE("parallel and serial runs agree") {
    namespace fs = std::filesystem;
    const std::string out1 = "/tmp/latflow_test_ser", out2 = "/tmp/latflow_test_par";
    fs::remove_all(out1);
    fs::remove_all(out2);
    ExperimentConfig c1 = small_hits_config(out1);
    c1.threads = 1;
    ExperimentConfig c2 = small_hits_config(out2);
    c2.threads = 4;
    run(c1);
    run(c2);
    CHECK(slurp(fs::path(out1) / "observations.jsonl") == slurp(fs::path(out2) / "observations.jsonl"));
    CHECK(slurp(fs::path(out1) / "summary.csv") == slurp(fs::path(out2) / "summary.csv"));
}

TEST_CASE("diag run emits the z table") {
    namespace fs = std::filesystem;
    const std::string out = "/tmp/latflow_test_diag";
    fs::remove_all(out);
    ExperimentConfig c;
    c.kind = ExperimentKind::diag;
    c.dims = SplitDims(2, 1);
    c.sampler = SamplerSpec::haar_exact2();
    c.nsamples = 2000;
    c.seed = 11;
    c.out_dir = out;
    RunResult r = run(c);
    CHECK(std::fabs(r.metrics.at("siegel_z")) < 3.5);
    CHECK(r.metrics.at("siegel_reference") == doctest::Approx(6.0 / std::acos(-1.0)).epsilon(1e-12));
    const std::string csv = slurp(fs::path(out) / "summary.csv");
    CHECK(csv.find("siegel_mean") != std::string::npos);
}

TEST_CASE("evl run compares against the oracle curve") {
    namespace fs = std::filesystem;
    const std::string out = "/tmp/latflow_test_evl";
    fs::remove_all(out);
    ExperimentConfig c;
    c.kind = ExperimentKind::evl;
    c.dims = SplitDims(2, 1);
    c.sampler = SamplerSpec::haar_exact2();
    c.T_grid = {50.0};
    c.nsamples = 300;
    c.oracle_nsamples = 4000;
    c.seed = 21;
    c.out_dir = out;
    RunResult r = run(c);
    CHECK(r.metrics.at("ks_T50") < 0.2);
    CHECK(r.metrics.at("censoring_T50") == 0.0);
    CHECK(fs::exists(fs::path(out) / "ecdf.svg"));
}

TEST_CASE("report renders from the result directory") {
    namespace fs = std::filesystem;
    const std::string out = "/tmp/latflow_test_report";
    fs::remove_all(out);
    run(small_hits_config(out));
    std::string md = render_report(out);
    CHECK(md.find("# latflow run report") != std::string::npos);
    CHECK(md.find("kind: hits") != std::string::npos);
    CHECK(md.find("summary") != std::string::npos);
    CHECK_THROWS_AS(render_report("/tmp/definitely_missing_dir_xyz"), std::runtime_error);
}

TEST_CASE("joint-counts and loglaw kinds run end to end") {
    namespace fs = std::filesystem;
    {
        const std::string out = "/tmp/latflow_test_joint";
        fs::remove_all(out);
        ExperimentConfig c;
        c.kind = ExperimentKind::joint_counts;
        c.dims = SplitDims(2, 1);
        c.sampler.kind = SamplerKind::ac_gaussian;
        c.sampler.dims = c.dims;
        c.L_grid = {4.0};
        c.joint_radii = {0.5};
        c.joint_counts = {0};
        c.nsamples = 300;
        c.oracle_nsamples = 2000;
        c.seed = 31;
        c.out_dir = out;
        RunResult r = run(c);
        CHECK(std::fabs(r.metrics.at("z_L4")) < 4.0);
    }
    {
        const std::string out = "/tmp/latflow_test_loglaw";
        fs::remove_all(out);
        ExperimentConfig c;
        c.kind = ExperimentKind::loglaw;
        c.dims = SplitDims(2, 1);
        c.sampler = SamplerSpec::haar_exact2();
        c.T_grid = {10.0, 100.0};
        c.nsamples = 60;
        c.seed = 41;
        c.out_dir = out;
        RunResult r = run(c);
        CHECK(r.metrics.at("median_T100") > 0.0);
        CHECK(r.metrics.at("median_T100") < 1.0);
    }
}
