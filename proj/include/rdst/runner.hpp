#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rdst/finite_difference.hpp"
#include "rdst/gallery.hpp"
#include "rdst/inversion.hpp"
#include "rdst/kernels.hpp"
#include "rdst/laplace.hpp"
#include "rdst/problem_json.hpp"
#include "rdst/series.hpp"
#include "rdst/short_time.hpp"

namespace rdst {

enum class Pipeline {
    solve_short_time,
    solve_operational,
    solve_series,
    solve_fd,
    compare,
    residual,
    invert_pair,
    bench,
};

inline Pipeline pipeline_from_string(const std::string& s) {
    if (s == "short-time") return Pipeline::solve_short_time;
    if (s == "operational") return Pipeline::solve_operational;
    if (s == "series") return Pipeline::solve_series;
    if (s == "fd") return Pipeline::solve_fd;
    if (s == "compare") return Pipeline::compare;
    if (s == "residual") return Pipeline::residual;
    if (s == "invert-pair") return Pipeline::invert_pair;
    if (s == "bench") return Pipeline::bench;
    throw spec_error("unknown pipeline/method: " + s);
}

inline const char* to_string(Pipeline p) {
    switch (p) {
        case Pipeline::solve_short_time: return "short-time";
        case Pipeline::solve_operational: return "operational";
        case Pipeline::solve_series: return "series";
        case Pipeline::solve_fd: return "fd";
        case Pipeline::compare: return "compare";
        case Pipeline::residual: return "residual";
        case Pipeline::invert_pair: return "invert-pair";
        case Pipeline::bench: return "bench";
    }
    return "?";
}

struct RunConfig {
    std::string problem;               // gallery id or JSON path
    Pipeline pipeline = Pipeline::compare;
    std::vector<std::string> methods;  // compare: e.g. {"short-time","series:K=20","fd"}
    std::vector<double> xs;            // explicit abscissae, or
    int x_count = 0;                   // count of uniformly spaced interior points
    std::vector<double> ts;
    std::vector<double> ps;            // residual pipeline
    double dt = 1.0e-2;                // short-time horizon
    int K = 20;                        // series terms
    int N = 14;                        // Gaver-Stehfest order
    int talbot_M = 32;
    bool use_talbot = false;
    double dx = 1.0e-3;                // fd space step
    double dt_fd = 1.0e-5;             // fd time step
    double tol = 1.0e-10;
    double residual_h = 1.0e-3;
    bool with_flux = false;
    int bench_points = 1000;
    int bench_repeats = 5;
    std::string out;                   // CSV path (empty: stdout)
    std::string summary_out;           // JSON summary path (empty: stdout)
};

struct RunResult {
    int exit_code = 0; // 0 ok, 1 config error, 2 completed with warnings
    nlohmann::json summary;
    std::vector<std::string> artifacts;
};

namespace detail {

inline int worker_count() {
    if (const char* env = std::getenv("RDST_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Order-preserving parallel map over index range [0, n).
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> futs;
    const int spawn = std::min<int>(workers, static_cast<int>(n));
    for (int w = 0; w < spawn; ++w) {
        futs.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        }));
    }
    for (auto& f : futs) f.get();
}

inline std::vector<double> resolve_xs(const RunConfig& cfg, const ProblemSpec& spec,
                                      bool interior_only) {
    if (!cfg.xs.empty()) return cfg.xs;
    const int n = cfg.x_count > 0 ? cfg.x_count : 41;
    std::vector<double> xs;
    if (!spec.bounded()) {
        // unbounded problems sample a unit-span window from the finite end
        const double base = spec.lower_finite() ? spec.l1 : spec.l2 - 1.0;
        for (int i = 0; i < n; ++i)
            xs.push_back(base + static_cast<double>(i + 1) / (n + 1));
        return xs;
    }
    const double L = spec.length();
    if (interior_only) {
        for (int i = 1; i <= n; ++i)
            xs.push_back(spec.l1 + L * static_cast<double>(i) / (n + 1));
    } else {
        for (int i = 0; i < n; ++i)
            xs.push_back(spec.l1 + L * static_cast<double>(i) / (n - 1));
        xs.back() = spec.l2;
    }
    return xs;
}

struct MethodSpec {
    Pipeline kind;
    int K = 0;
};

inline MethodSpec parse_method(const std::string& m, const RunConfig& cfg) {
    MethodSpec out{Pipeline::solve_short_time, cfg.K};
    std::string name = m;
    if (const auto pos = m.find(':'); pos != std::string::npos) {
        name = m.substr(0, pos);
        const std::string arg = m.substr(pos + 1);
        if (arg.rfind("K=", 0) == 0) out.K = std::atoi(arg.c_str() + 2);
        else throw spec_error("unknown method argument: " + arg);
    }
    out.kind = pipeline_from_string(name);
    return out;
}

} // namespace detail

/// Short-time field on the grid; endpoints take the boundary expansions.
inline SolutionField solve_short_time_field(const gallery::NamedProblem& np,
                                            const RunConfig& cfg,
                                            std::vector<std::string>* warnings) {
    ShortTimeConfig stc;
    stc.dt = cfg.dt;
    ShortTimeSolver st(np.spec, stc);
    auto xs = detail::resolve_xs(cfg, np.spec, /*interior_only=*/false);
    SolutionField field(xs, cfg.ts, Provenance::short_time, cfg.with_flux);
    const std::size_t nx = xs.size();
    std::vector<std::string> local(nx * cfg.ts.size());
    detail::parallel_for(nx * cfg.ts.size(), [&](std::size_t idx) {
        const std::size_t ix = idx % nx;
        const std::size_t it = idx / nx;
        const double x = xs[ix];
        const double t = cfg.ts[it];
        try {
            if (x <= np.spec.l1)
                field.u(ix, it) = st.value_at(Side::lower, t);
            else if (x >= np.spec.l2)
                field.u(ix, it) = st.value_at(Side::upper, t);
            else
                field.u(ix, it) = st.interior(x, t);
            if (cfg.with_flux) {
                if (x <= np.spec.l1)
                    field.ux(ix, it) = st.flux_at(Side::lower, t);
                else if (x >= np.spec.l2)
                    field.ux(ix, it) = st.flux_at(Side::upper, t);
                else
                    field.ux(ix, it) = st.interior_dx(x, t);
            }
        } catch (const std::exception& e) {
            field.u(ix, it) = std::numeric_limits<double>::quiet_NaN();
            local[idx] = e.what();
        }
    });
    for (const auto& w : local)
        if (!w.empty() && warnings) warnings->push_back(w);
    return field;
}

inline SolutionField solve_operational_field(const gallery::NamedProblem& np,
                                             const RunConfig& cfg,
                                             std::vector<std::string>* warnings) {
    LaplaceQuadTols tols;
    tols.rel_tol = std::min(cfg.tol, 1.0e-10);
    OperationalSolution op(np.spec, tols);
    auto xs = detail::resolve_xs(cfg, np.spec, /*interior_only=*/false);
    SolutionField field(xs, cfg.ts, Provenance::operational);
    const std::size_t nx = xs.size();
    std::vector<std::string> local(nx * cfg.ts.size());
    detail::parallel_for(nx * cfg.ts.size(), [&](std::size_t idx) {
        const std::size_t ix = idx % nx;
        const std::size_t it = idx / nx;
        try {
            if (cfg.use_talbot) {
                field.u(ix, it) = invert(
                    [&](std::complex<double> p) { return op.value(xs[ix], p); }, cfg.ts[it],
                    FixedTalbot{cfg.talbot_M});
            } else {
                field.u(ix, it) = invert([&](double p) { return op.value(xs[ix], p); },
                                         cfg.ts[it], GaverStehfest{cfg.N});
            }
        } catch (const std::exception& e) {
            field.u(ix, it) = std::numeric_limits<double>::quiet_NaN();
            local[idx] = e.what();
        }
    });
    for (const auto& w : local)
        if (!w.empty() && warnings) warnings->push_back(w);
    return field;
}

inline SolutionField solve_series_field(const gallery::NamedProblem& np, const RunConfig& cfg,
                                        int K) {
    SeriesSolution s(np.spec, K);
    auto xs = detail::resolve_xs(cfg, np.spec, /*interior_only=*/false);
    SolutionField field(xs, cfg.ts, Provenance::series, cfg.with_flux);
    detail::parallel_for(xs.size() * cfg.ts.size(), [&](std::size_t idx) {
        const std::size_t ix = idx % xs.size();
        const std::size_t it = idx / xs.size();
        field.u(ix, it) = s(xs[ix], cfg.ts[it]);
        if (cfg.with_flux) field.ux(ix, it) = s.derivative(xs[ix], cfg.ts[it]);
    });
    return field;
}

inline SolutionField solve_fd_field(const gallery::NamedProblem& np, const RunConfig& cfg) {
    auto field = fd_solve(np.spec, cfg.dx, cfg.dt_fd, cfg.ts);
    if (cfg.xs.empty() && cfg.x_count == 0) return field;
    // restrict to the requested abscissae (snapped to the fd grid)
    auto xs = detail::resolve_xs(cfg, np.spec, false);
    SolutionField out(xs, field.ts(), Provenance::fd);
    const auto& gx = field.xs();
    const double h = gx.size() > 1 ? gx[1] - gx[0] : 1.0;
    for (std::size_t it = 0; it < field.ts().size(); ++it) {
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const auto gi = static_cast<std::size_t>(
                std::clamp(std::lround((xs[ix] - gx.front()) / h), 0L,
                           static_cast<long>(gx.size() - 1)));
            out.u(ix, it) = field.u(gi, it);
        }
    }
    return out;
}

struct BenchReport {
    double short_time_ms = 0.0;
    double series_ms = 0.0;
    double ratio_series_over_short_time = 0.0;
    int points = 0;
    bool low_confidence = false;
};

/// Wall-clock comparison of the short-time boundary-flux pipeline against the
/// truncated series on the same t-grid. Medians over repeated runs after a
/// warm-up; the published "about 20 times" figure is machine- and
/// implementation-dependent, so the measured ratio is reported, not asserted.
inline BenchReport bench_flux(const gallery::NamedProblem& np, const RunConfig& cfg) {
    using clock = std::chrono::steady_clock;
    BenchReport rep;
    rep.points = cfg.bench_points;
    rep.low_confidence = cfg.bench_points < 100;
    std::vector<double> ts(static_cast<std::size_t>(cfg.bench_points));
    for (int i = 0; i < cfg.bench_points; ++i)
        ts[static_cast<std::size_t>(i)] =
            cfg.dt * static_cast<double>(i + 1) / cfg.bench_points;

    volatile double sink = 0.0;
    auto run_short = [&] {
        ShortTimeConfig stc;
        stc.dt = cfg.dt;
        ShortTimeSolver st(np.spec, stc);
        double acc = 0.0;
        for (double t : ts) acc += st.flux_at(Side::lower, t);
        sink = acc;
    };
    auto run_series = [&] {
        SeriesSolution s(np.spec, cfg.K);
        double acc = 0.0;
        for (double t : ts) acc += s.derivative(np.spec.l1, t);
        sink = acc;
    };
    (void)sink;

    auto median_ms = [&](auto&& fn) {
        fn(); // warm-up
        std::vector<double> samples;
        for (int r = 0; r < std::max(1, cfg.bench_repeats); ++r) {
            const auto t0 = clock::now();
            fn();
            const auto t1 = clock::now();
            samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        std::sort(samples.begin(), samples.end());
        return samples[samples.size() / 2];
    };

    rep.short_time_ms = median_ms(run_short);
    rep.series_ms = median_ms(run_series);
    rep.ratio_series_over_short_time =
        rep.short_time_ms > 0.0 ? rep.series_ms / rep.short_time_ms : 0.0;
    return rep;
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

/// Executes a batch configuration: writes CSV artifacts and returns the JSON
/// summary. Deterministic CSV for identical configurations.
inline RunResult run(const RunConfig& cfg) {
    using clock = std::chrono::steady_clock;
    RunResult result;
    std::vector<std::string> warnings;
    nlohmann::json& summary = result.summary;
    summary["schema"] = 1;
    summary["pipeline"] = to_string(cfg.pipeline);
    summary["problem"] = cfg.problem;
    summary["params"] = {{"dt", cfg.dt},   {"K", cfg.K},   {"N", cfg.N},
                         {"dx", cfg.dx},   {"dt_fd", cfg.dt_fd}, {"tol", cfg.tol}};

    const auto t_start = clock::now();
    auto np = load_problem(cfg.problem);

    auto emit_field = [&](const SolutionField& field, const std::string& tag) {
        const std::string csv = field.to_csv();
        if (cfg.out.empty()) {
            result.artifacts.push_back("(stdout:" + tag + ")");
            std::fputs(csv.c_str(), stdout);
        } else {
            std::string path = cfg.out;
            if (!tag.empty()) {
                const auto dot = path.rfind('.');
                path = dot == std::string::npos ? path + "." + tag
                                                : path.substr(0, dot) + "." + tag +
                                                      path.substr(dot);
            }
            write_text(path, csv);
            result.artifacts.push_back(path);
        }
    };

    switch (cfg.pipeline) {
        case Pipeline::solve_short_time:
            emit_field(solve_short_time_field(np, cfg, &warnings), "");
            break;
        case Pipeline::solve_operational:
            emit_field(solve_operational_field(np, cfg, &warnings), "");
            break;
        case Pipeline::solve_series:
            emit_field(solve_series_field(np, cfg, cfg.K), "");
            break;
        case Pipeline::solve_fd:
            emit_field(solve_fd_field(np, cfg), "");
            break;
        case Pipeline::compare: {
            if (cfg.methods.size() < 2)
                throw spec_error("compare needs at least two methods");
            std::vector<std::pair<std::string, SolutionField>> fields;
            for (const auto& m : cfg.methods) {
                const auto ms = detail::parse_method(m, cfg);
                const auto t0 = clock::now();
                SolutionField f = [&] {
                    switch (ms.kind) {
                        case Pipeline::solve_short_time:
                            return solve_short_time_field(np, cfg, &warnings);
                        case Pipeline::solve_operational:
                            return solve_operational_field(np, cfg, &warnings);
                        case Pipeline::solve_series:
                            return solve_series_field(np, cfg, ms.K);
                        case Pipeline::solve_fd:
                            return solve_fd_field(np, cfg);
                        default:
                            throw spec_error("method not usable inside compare: " + m);
                    }
                }();
                summary["timings_ms"][m] =
                    std::chrono::duration<double, std::milli>(clock::now() - t0).count();
                fields.emplace_back(m, std::move(f));
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
                emit_field(fields[i].second, fields[i].first);
                for (std::size_t j = i + 1; j < fields.size(); ++j) {
                    const auto m = compare_fields(fields[i].second, fields[j].second);
                    nlohmann::json entry = {{"a", fields[i].first},
                                            {"b", fields[j].first},
                                            {"max_abs", m.max_abs},
                                            {"l2", m.l2},
                                            {"x_at_max", m.x_at_max}};
                    summary["comparisons"].push_back(entry);
                }
            }
            break;
        }
        case Pipeline::residual: {
            if (cfg.ps.empty() || cfg.xs.empty())
                throw spec_error("residual needs explicit --x and --p lists");
            OperationalSolution op(np.spec);
            std::string csv = "x,p,residual\n";
            bool all_below = true;
            char buf[96];
            for (double p : cfg.ps) {
                for (double x : cfg.xs) {
                    const double r = op.ode_residual(x, p, cfg.residual_h);
                    all_below = all_below && r <= cfg.tol;
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, p, r);
                    csv += buf;
                }
            }
            summary["all_below_tol"] = all_below;
            if (cfg.out.empty()) {
                std::fputs(csv.c_str(), stdout);
            } else {
                write_text(cfg.out, csv);
                result.artifacts.push_back(cfg.out);
            }
            break;
        }
        case Pipeline::invert_pair: {
            // demonstration pair chi(eta, .) vs Gamma on the problem's (a, b)
            const double eta = np.spec.bounded() ? np.spec.length() : 1.0;
            std::string csv = "t,inverted,reference\n";
            double worst = 0.0;
            char buf[96];
            for (double t : cfg.ts) {
                const double ref = gamma_inverse_chi(eta, t, np.spec.a, np.spec.b);
                const double got =
                    cfg.use_talbot
                        ? invert([&](std::complex<double> p) {
                              return chi(eta, p, np.spec.a, np.spec.b);
                          }, t, FixedTalbot{cfg.talbot_M})
                        : invert([&](double p) { return chi(eta, p, np.spec.a, np.spec.b); },
                                 t, GaverStehfest{cfg.N});
                worst = std::max(worst, std::abs(got - ref));
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, got, ref);
                csv += buf;
            }
            summary["max_abs_error"] = worst;
            if (cfg.out.empty()) {
                std::fputs(csv.c_str(), stdout);
            } else {
                write_text(cfg.out, csv);
                result.artifacts.push_back(cfg.out);
            }
            break;
        }
        case Pipeline::bench: {
            const auto rep = bench_flux(np, cfg);
            summary["bench"] = {{"short_time_ms", rep.short_time_ms},
                                {"series_ms", rep.series_ms},
                                {"ratio_series_over_short_time",
                                 rep.ratio_series_over_short_time},
                                {"points", rep.points},
                                {"low_confidence", rep.low_confidence},
                                {"context", "the source publication reports 'about 20 times' "
                                            "on its own setup; machine-dependent, not asserted"}};
            break;
        }
    }

    summary["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(clock::now() - t_start).count();
    summary["warnings"] = warnings;
    if (!warnings.empty()) result.exit_code = 2;

    if (!cfg.summary_out.empty()) {
        write_text(cfg.summary_out, summary.dump(2) + "\n");
        result.artifacts.push_back(cfg.summary_out);
    }
    return result;
}

} // namespace rdst
