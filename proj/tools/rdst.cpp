// Batch front-end over the solver library: load a problem (JSON document or
// gallery id), run a pipeline, emit CSV fields plus a JSON summary.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdst/runner.hpp"

namespace {

void add_common(CLI::App* cmd, rdst::RunConfig& cfg) {
    cmd->add_option("--problem", cfg.problem, "gallery id (example_6_1, luikov, zero, eigenmode) or JSON file")
        ->required();
    cmd->add_option("--x", cfg.xs, "explicit x abscissae")->delimiter(',');
    cmd->add_option("--nx", cfg.x_count, "count of uniformly spaced x points");
    cmd->add_option("--t", cfg.ts, "evaluation times")->delimiter(',');
    cmd->add_option("--dt", cfg.dt, "short-time horizon (default 1e-2)");
    cmd->add_option("--K", cfg.K, "series term budget");
    cmd->add_option("--N", cfg.N, "Gaver-Stehfest order (even, 4..20)");
    cmd->add_flag("--talbot", cfg.use_talbot, "invert with fixed Talbot instead");
    cmd->add_option("--talbot-M", cfg.talbot_M, "Talbot node count");
    cmd->add_option("--dx", cfg.dx, "finite-difference space step");
    cmd->add_option("--dtfd", cfg.dt_fd, "finite-difference time step");
    cmd->add_option("--tol", cfg.tol, "tolerance (pipeline-dependent)");
    cmd->add_flag("--flux", cfg.with_flux, "emit the u_x column too");
    cmd->add_option("--out", cfg.out, "CSV output path (default stdout)");
    cmd->add_option("--summary", cfg.summary_out, "JSON summary path (default stdout)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-analytical 1D reaction-diffusion solver"};
    app.require_subcommand(1);

    rdst::RunConfig cfg;
    std::string solve_method = "short-time";

    auto* solve = app.add_subcommand("solve", "evaluate one solution pipeline on a grid");
    add_common(solve, cfg);
    solve->add_option("--method", solve_method,
                      "short-time | operational | series | fd");

    auto* compare = app.add_subcommand("compare", "run several pipelines and tabulate errors");
    add_common(compare, cfg);
    compare->add_option("--methods", cfg.methods,
                        "comma list, e.g. short-time,series:K=20,fd")
        ->delimiter(',')
        ->required();

    auto* invert = app.add_subcommand("invert", "numerically invert the chi/Gamma pair");
    add_common(invert, cfg);

    auto* residual = app.add_subcommand("residual", "operational-solution ODE residual table");
    add_common(residual, cfg);
    residual->add_option("--p", cfg.ps, "Laplace abscissae")->delimiter(',');
    residual->add_option("--step", cfg.residual_h, "difference step");

    auto* bench = app.add_subcommand("bench", "time short-time flux vs series flux");
    add_common(bench, cfg);
    bench->add_option("--points", cfg.bench_points, "t samples per run");
    bench->add_option("--repeats", cfg.bench_repeats, "timing repeats (median reported)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) cfg.pipeline = rdst::pipeline_from_string(solve_method);
        else if (compare->parsed()) cfg.pipeline = rdst::Pipeline::compare;
        else if (invert->parsed()) cfg.pipeline = rdst::Pipeline::invert_pair;
        else if (residual->parsed()) cfg.pipeline = rdst::Pipeline::residual;
        else cfg.pipeline = rdst::Pipeline::bench;

        if (cfg.ts.empty() && cfg.pipeline != rdst::Pipeline::residual &&
            cfg.pipeline != rdst::Pipeline::bench)
            cfg.ts = {1.0e-2};

        const auto result = rdst::run(cfg);
        if (cfg.summary_out.empty())
            std::fprintf(stderr, "%s\n", result.summary.dump(2).c_str());
        return result.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
