#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rdst/problem_json.hpp"
#include "rdst/runner.hpp"

using namespace rdst;

namespace {
std::string tmp_path(const std::string& name) {
    return std::string("/tmp/rdst_test_") + name;
}
std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}
} // namespace

TEST_CASE("problem json round-trips the worked example") {
    const char* doc = R"({
      "schema": 1,
      "a": 0.5, "b": 0.0, "l1": 0.0, "l2": 10.0, "T": 1.0,
      "phi": {"type": "piecewise_linear", "x": [0, 5, 10], "v": [0, 2.5, 0]},
      "f": {"type": "zero"},
      "bc1": {"alpha": 1.0, "beta": 0.0, "g": {"type": "zero"}},
      "bc2": {"alpha": 1.0, "beta": 0.0, "g": 0.0}
    })";
    auto spec = problem_from_json(nlohmann::json::parse(doc));
    CHECK(spec.a == 0.5);
    CHECK(spec.phi(5.0) == 2.5);
    CHECK(classify_case(spec) == CaseKind::DirichletDirichlet);
}

TEST_CASE("problem json understands infinite endpoints and none conditions") {
    const char* doc = R"({
      "schema": 1,
      "a": 0.8, "b": 0.0, "l1": 0.0, "l2": "inf", "T": 1.0,
      "phi": {"type": "constant", "value": 2.0},
      "f": {"type": "constant", "value": 1.0},
      "bc1": {"alpha": 1.0, "beta": 0.0, "g": {"type": "constant", "value": 5.0}},
      "bc2": {"type": "none"}
    })";
    auto spec = problem_from_json(nlohmann::json::parse(doc));
    CHECK_FALSE(spec.upper_finite());
    CHECK(spec.bc2.is_none());
}

TEST_CASE("problem json rejects malformed documents") {
    CHECK_THROWS_AS(problem_from_json(nlohmann::json::parse(R"({"schema": 2, "a": 1.0,
        "l1": 0, "l2": 1})")),
                    spec_error);
    CHECK_THROWS_AS(problem_from_json(nlohmann::json::parse(R"({"a": 1.0, "l1": 0, "l2": "wat",
        "bc1": {"alpha":1,"beta":0}, "bc2": {"alpha":1,"beta":0}})")),
                    spec_error);
    // invalid spec content (degenerate bc)
    CHECK_THROWS_AS(problem_from_json(nlohmann::json::parse(R"({"a": 1.0, "l1": 0, "l2": 1,
        "bc1": {"alpha":0,"beta":0}, "bc2": {"alpha":1,"beta":0}})")),
                    spec_error);
}

TEST_CASE("identical run configurations produce byte-identical csv") {
    RunConfig cfg;
    cfg.problem = "example_6_1";
    cfg.pipeline = Pipeline::solve_short_time;
    cfg.x_count = 21;
    cfg.ts = {1e-3, 1e-2};
    cfg.with_flux = true;
    cfg.out = tmp_path("det_a.csv");
    auto r1 = run(cfg);
    REQUIRE(r1.exit_code == 0);
    cfg.out = tmp_path("det_b.csv");
    auto r2 = run(cfg);
    CHECK(slurp(tmp_path("det_a.csv")) == slurp(tmp_path("det_b.csv")));
    CHECK_FALSE(slurp(tmp_path("det_a.csv")).empty());
    std::remove(tmp_path("det_a.csv").c_str());
    std::remove(tmp_path("det_b.csv").c_str());
}

TEST_CASE("zero problem produces an all-zero csv through every solve pipeline") {
    for (auto pipe : {Pipeline::solve_short_time, Pipeline::solve_series, Pipeline::solve_fd,
                      Pipeline::solve_operational}) {
        RunConfig cfg;
        cfg.problem = "zero";
        cfg.pipeline = pipe;
        cfg.x_count = 5;
        cfg.ts = {1e-3};
        cfg.dx = 0.05;
        cfg.dt_fd = 1e-4;
        cfg.out = tmp_path("zero.csv");
        auto r = run(cfg);
        REQUIRE(r.exit_code == 0);
        std::ifstream f(cfg.out);
        std::string line;
        std::getline(f, line); // header
        while (std::getline(f, line)) {
            const auto last = line.rfind(',');
            CHECK(std::stod(line.substr(last + 1)) == 0.0);
        }
        std::remove(cfg.out.c_str());
    }
}

TEST_CASE("compare pipeline tabulates cross-method errors on the worked example") {
    RunConfig cfg;
    cfg.problem = "example_6_1";
    cfg.pipeline = Pipeline::compare;
    cfg.methods = {"short-time", "series:K=20", "fd"};
    cfg.x_count = 19;
    cfg.ts = {1e-2};
    cfg.dx = 1e-2;
    cfg.dt_fd = 1e-4;
    cfg.out = tmp_path("cmp.csv");
    auto r = run(cfg);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.summary.contains("comparisons"));
    REQUIRE(r.summary["comparisons"].size() == 3);
    for (const auto& c : r.summary["comparisons"]) {
        CHECK(c["max_abs"].get<double>() < 5e-2);
    }
    // three artifacts, one per method
    CHECK(r.artifacts.size() >= 3);
    for (const auto& a : r.artifacts) std::remove(a.c_str());
}

TEST_CASE("residual pipeline reports sub-tolerance entries") {
    RunConfig cfg;
    cfg.problem = "example_6_1";
    cfg.pipeline = Pipeline::residual;
    cfg.xs = {2.0, 3.0, 7.0};
    cfg.ps = {1.0, 10.0, 100.0};
    cfg.residual_h = 1e-3;
    cfg.tol = 1e-4;
    cfg.out = tmp_path("res.csv");
    auto r = run(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.summary["all_below_tol"].get<bool>());
    std::remove(cfg.out.c_str());
}

TEST_CASE("invert pipeline checks the chi/Gamma pair") {
    RunConfig cfg;
    cfg.problem = "eigenmode"; // a=1, b=0, unit interval: eta = 1
    cfg.pipeline = Pipeline::invert_pair;
    cfg.ts = {0.2, 0.5, 1.0};
    cfg.use_talbot = true;
    cfg.out = tmp_path("pair.csv");
    auto r = run(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.summary["max_abs_error"].get<double>() < 1e-8);
    std::remove(cfg.out.c_str());
}

TEST_CASE("bench pipeline emits a timing report with the ratio") {
    RunConfig cfg;
    cfg.problem = "example_6_1";
    cfg.pipeline = Pipeline::bench;
    cfg.bench_points = 50; // deliberately small: must be flagged
    cfg.bench_repeats = 1;
    auto r = run(cfg);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.summary.contains("bench"));
    CHECK(r.summary["bench"]["ratio_series_over_short_time"].get<double>() > 0.0);
    CHECK(r.summary["bench"]["low_confidence"].get<bool>());
    CHECK(r.summary["bench"].contains("context"));
}

TEST_CASE("per-point failures downgrade the exit code to completed-with-warnings") {
    RunConfig cfg;
    cfg.problem = "example_6_1";
    cfg.pipeline = Pipeline::solve_short_time;
    cfg.xs = {5.0};
    cfg.ts = {0.5}; // beyond the short-time horizon dt = 1e-2
    cfg.out = tmp_path("warn.csv");
    auto r = run(cfg);
    CHECK(r.exit_code == 2);
    CHECK_FALSE(r.summary["warnings"].empty());
    std::remove(cfg.out.c_str());
}

TEST_CASE("csv bytes do not depend on the worker count") {
    RunConfig cfg;
    cfg.problem = "example_6_1";
    cfg.pipeline = Pipeline::solve_short_time;
    cfg.x_count = 11;
    cfg.ts = {1e-3, 1e-2};
    cfg.with_flux = true;

    setenv("RDST_WORKERS", "1", 1);
    cfg.out = tmp_path("w1.csv");
    run(cfg);
    setenv("RDST_WORKERS", "4", 1);
    cfg.out = tmp_path("w4.csv");
    run(cfg);
    unsetenv("RDST_WORKERS");
    CHECK(slurp(tmp_path("w1.csv")) == slurp(tmp_path("w4.csv")));
    std::remove(tmp_path("w1.csv").c_str());
    std::remove(tmp_path("w4.csv").c_str());
}

TEST_CASE("fd pipeline cost grows with the step count") {
    using clk = std::chrono::steady_clock;
    auto np = gallery::example_6_1();
    const double ts_few[] = {1e-3};
    const double ts_many[] = {1e-2};
    auto time_run = [&](std::span<const double> snap, double dt) {
        const auto t0 = clk::now();
        fd_solve(np.spec, 2e-3, dt, snap);
        return std::chrono::duration<double>(clk::now() - t0).count();
    };
    time_run(ts_few, 1e-5); // warm-up
    const double t_few = time_run(ts_few, 1e-5);   // 100 steps
    const double t_many = time_run(ts_many, 1e-5); // 1000 steps
    // roughly linear in the step count; very loose bounds to stay robust
    CHECK(t_many > 2.0 * t_few);
    CHECK(t_many < 60.0 * t_few);
}
