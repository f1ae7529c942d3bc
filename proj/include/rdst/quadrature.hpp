#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "rdst/errors.hpp"

namespace rdst::quad {

// Gauss-Kronrod 7-15 pair, positive abscissae. Kronrod points interleave the
// 7-point Gauss rule; odd indices are the shared Gauss nodes.
inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};

inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

inline constexpr std::array<double, 4> gk15_wg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <typename T>
inline double magnitude(const T& v) {
    return std::abs(v);
}

struct Options {
    double rel_tol = 1.0e-10;
    double abs_tol = 0.0;
    int max_panels = 4000;
    // When the budget runs out: throw (default) or return the achieved estimate.
    bool throw_on_budget = true;
};

template <typename T>
struct Result {
    T value{};
    double error = 0.0;      // accumulated error estimate
    int evaluations = 0;
    bool converged = false;  // met the requested tolerance
    bool round_off_limited = false; // stopped at the double-precision floor instead
};

namespace detail {

template <typename T, typename F>
void gk15_panel(F&& f, double a, double b, T& out_k, double& out_err) {
    const double c = 0.5 * (a + b);
    const double m = 0.5 * (b - a);
    T gauss{};
    T kron{};
    {
        const T fc = f(c);
        kron += gk15_wk[7] * fc;
        gauss += gk15_wg[3] * fc;
    }
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = m * gk15_x[i];
        const T sum = f(c - dx) + f(c + dx);
        kron += gk15_wk[i] * sum;
        if (i % 2 == 1) gauss += gk15_wg[i / 2] * sum;
    }
    out_k = m * kron;
    out_err = magnitude(m * (kron - gauss));
}

template <typename T>
struct Panel {
    double a, b;
    T value;
    double error;
};

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [lo, hi].
/// `interior_splits` lists abscissae where the integrand has kinks or jumps;
/// panels never straddle them. The worst panel (by error estimate) is bisected
/// until the accumulated error meets max(abs_tol, rel_tol * |integral|).
/// Deterministic for a given integrand.
template <typename T = double, typename F>
Result<T> integrate(F&& f, double lo, double hi, const Options& opt = {},
                    std::span<const double> interior_splits = {}) {
    Result<T> res;
    if (!(lo < hi)) {
        res.converged = true;
        return res;
    }

    std::vector<double> cuts;
    cuts.push_back(lo);
    for (double s : interior_splits)
        if (s > lo && s < hi) cuts.push_back(s);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<detail::Panel<T>> panels;
    panels.reserve(64);
    auto push_panel = [&](double a, double b) {
        detail::Panel<T> p{a, b, T{}, 0.0};
        detail::gk15_panel<T>(f, a, b, p.value, p.error);
        res.evaluations += 15;
        panels.push_back(p);
        std::push_heap(panels.begin(), panels.end(),
                       [](const auto& x, const auto& y) { return x.error < y.error; });
    };

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) push_panel(cuts[i], cuts[i + 1]);

    double l1_mass = 0.0;
    auto tally = [&] {
        // Accumulate in left-to-right panel order so the result does not
        // depend on the heap's internal layout.
        std::vector<const detail::Panel<T>*> ordered;
        ordered.reserve(panels.size());
        for (const auto& p : panels) ordered.push_back(&p);
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto* x, const auto* y) { return x->a < y->a; });
        T total{};
        double err = 0.0;
        double l1 = 0.0;
        for (const auto* p : ordered) {
            total += p->value;
            err += p->error;
            l1 += magnitude(p->value);
        }
        res.value = total;
        res.error = err;
        l1_mass = l1;
    };

    // Summing the integrand's mass cannot be more accurate than this in
    // double precision; cancellation-dominated integrals bottom out here.
    auto round_off_floor = [&] { return 32.0 * 2.220446049250313e-16 * l1_mass; };

    double best_err = std::numeric_limits<double>::infinity();
    int stalled = 0;
    while (true) {
        tally();
        const double goal = std::max(opt.abs_tol, opt.rel_tol * magnitude(res.value));
        if (res.error <= goal) {
            res.converged = true;
            return res;
        }
        if (res.error <= round_off_floor()) {
            res.round_off_limited = true;
            return res;
        }
        if (res.error < 0.999 * best_err) {
            best_err = res.error;
            stalled = 0;
        } else if (++stalled >= 48) {
            break; // error estimate has stopped improving: round-off floor
        }
        if (static_cast<int>(panels.size()) >= opt.max_panels) break;
        std::pop_heap(panels.begin(), panels.end(),
                      [](const auto& x, const auto& y) { return x.error < y.error; });
        const detail::Panel<T> worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval no longer splittable in double precision; keep it.
            panels.push_back(worst);
            std::push_heap(panels.begin(), panels.end(),
                           [](const auto& x, const auto& y) { return x.error < y.error; });
            break;
        }
        push_panel(worst.a, mid);
        push_panel(mid, worst.b);
    }

    tally();
    const double goal = std::max(opt.abs_tol, opt.rel_tol * magnitude(res.value));
    if (res.error <= goal) {
        res.converged = true;
        return res;
    }
    // The estimate stopped improving: the integrand's own evaluation noise is
    // the floor (e.g. cancellation inside user functions). Accept while the
    // result is still accurate to well beyond single precision; anything
    // worse is treated as a genuine failure.
    if (res.error <= std::max(round_off_floor(), 1.0e-7 * magnitude(res.value))) {
        res.round_off_limited = true;
        return res;
    }
    if (opt.throw_on_budget) {
        std::ostringstream msg;
        msg << "quadrature budget exhausted on [" << lo << ", " << hi
            << "]: achieved estimate " << magnitude(res.value) << " with error "
            << res.error << " (goal " << goal << ")";
        throw numeric_error(msg.str());
    }
    return res;
}

} // namespace rdst::quad
