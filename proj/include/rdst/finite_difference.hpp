#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "rdst/field.hpp"
#include "rdst/problem.hpp"

namespace rdst {

/// Crank-Nicolson solver with second-order ghost-point closure of the Robin
/// conditions; unconditionally stable, second order in dx and dt on smooth
/// data. Used as an independent reference, never as part of the
/// semi-analytical path.
inline SolutionField fd_solve(const ProblemSpec& spec, double dx, double dt,
                              std::span<const double> snapshot_times) {
    if (!spec.bounded()) throw spec_error("fd_solve: bounded interval required");
    if (!(dx > 0.0) || !(dt > 0.0)) throw spec_error("fd_solve: dx and dt must be positive");
    auto rep = validate(spec);
    if (!rep.ok()) throw spec_error("fd_solve: invalid problem: " + rep.violations.front());

    const double L = spec.length();
    const std::size_t n = static_cast<std::size_t>(std::lround(L / dx)) + 1;
    const double h = L / static_cast<double>(n - 1); // dx snapped to the grid
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = spec.l1 + h * static_cast<double>(i);
    xs.back() = spec.l2;

    std::vector<double> ts(snapshot_times.begin(), snapshot_times.end());
    std::sort(ts.begin(), ts.end());
    SolutionField field(xs, ts, Provenance::fd);

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = spec.phi(xs[i]);

    const double lam = spec.a * spec.a * dt / (h * h);
    const double mu = spec.b * dt;
    const bool d1 = beta_effectively_zero(spec.bc1);
    const bool d2 = beta_effectively_zero(spec.bc2);

    // Dirichlet values override whatever phi gave at the ends.
    auto apply_dirichlet = [&](double t) {
        if (d1) u.front() = spec.bc1.g(t) / spec.bc1.alpha;
        if (d2) u.back() = spec.bc2.g(t) / spec.bc2.alpha;
    };
    apply_dirichlet(0.0);

    // tridiagonal factors (time-independent)
    std::vector<double> dl(n, 0.0), dm(n, 0.0), du(n, 0.0), rhs(n, 0.0);

    const std::size_t total_steps =
        ts.empty() ? 0
                   : static_cast<std::size_t>(std::lround(ts.back() / dt));
    std::vector<std::size_t> snap_steps;
    for (double t : ts) snap_steps.push_back(static_cast<std::size_t>(std::lround(t / dt)));

    auto snapshot = [&](std::size_t step) {
        for (std::size_t k = 0; k < snap_steps.size(); ++k)
            if (snap_steps[k] == step)
                for (std::size_t i = 0; i < n; ++i) field.u(i, k) = u[i];
    };
    snapshot(0);

    std::vector<double> cp(n), dp(n);
    for (std::size_t step = 1; step <= total_steps; ++step) {
        const double t0 = dt * static_cast<double>(step - 1);
        const double t1 = dt * static_cast<double>(step);
        const double tm = 0.5 * (t0 + t1);

        for (std::size_t i = 1; i + 1 < n; ++i) {
            dl[i] = -0.5 * lam;
            dm[i] = 1.0 + lam + 0.5 * mu;
            du[i] = -0.5 * lam;
            rhs[i] = 0.5 * lam * u[i - 1] + (1.0 - lam - 0.5 * mu) * u[i] +
                     0.5 * lam * u[i + 1] + dt * spec.f(xs[i], tm);
        }

        if (d1) {
            dm[0] = 1.0;
            du[0] = 0.0;
            rhs[0] = spec.bc1.g(t1) / spec.bc1.alpha;
        } else {
            // ghost: u_{-1} = u_1 - (2h/beta)(g - alpha u_0)
            const double c = 2.0 * h / spec.bc1.beta;
            dm[0] = 1.0 + lam + 0.5 * mu - 0.5 * lam * c * spec.bc1.alpha;
            du[0] = -lam;
            rhs[0] = (1.0 - lam - 0.5 * mu + 0.5 * lam * c * spec.bc1.alpha) * u[0] +
                     lam * u[1] - 0.5 * lam * c * (spec.bc1.g(t0) + spec.bc1.g(t1)) +
                     dt * spec.f(xs[0], tm);
        }
        if (d2) {
            dl[n - 1] = 0.0;
            dm[n - 1] = 1.0;
            rhs[n - 1] = spec.bc2.g(t1) / spec.bc2.alpha;
        } else {
            // ghost: u_{n} = u_{n-2} + (2h/beta)(g - alpha u_{n-1})
            const double c = 2.0 * h / spec.bc2.beta;
            dm[n - 1] = 1.0 + lam + 0.5 * mu + 0.5 * lam * c * spec.bc2.alpha;
            dl[n - 1] = -lam;
            rhs[n - 1] = (1.0 - lam - 0.5 * mu - 0.5 * lam * c * spec.bc2.alpha) * u[n - 1] +
                         lam * u[n - 2] + 0.5 * lam * c * (spec.bc2.g(t0) + spec.bc2.g(t1)) +
                         dt * spec.f(xs[n - 1], tm);
        }

        // Thomas algorithm
        cp[0] = du[0] / dm[0];
        dp[0] = rhs[0] / dm[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = dm[i] - dl[i] * cp[i - 1];
            cp[i] = (i + 1 < n ? du[i] : 0.0) / m;
            dp[i] = (rhs[i] - dl[i] * dp[i - 1]) / m;
        }
        u[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) u[i] = dp[i] - cp[i] * u[i + 1];

        snapshot(step);
    }
    return field;
}

} // namespace rdst
