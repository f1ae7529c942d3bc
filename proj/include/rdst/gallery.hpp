#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "rdst/problem.hpp"

namespace rdst::gallery {

/// A canned problem plus closed-form references. The closed forms are stored
/// as independent evaluators and are never substituted into the general
/// solution path; their whole purpose is to stand against it in tests.
struct NamedProblem {
    std::string id;
    ProblemSpec spec;

    // time-domain references (empty when not available)
    std::function<double(double, double)> exact_r;       // r(x, t)
    std::function<double(double, double)> exact_u;       // u(x, t)
    std::function<double(double, double, int)> series_k; // K-term series u(x, t)
    std::function<double(double)> exact_flux_lower;      // u_x^a(l1, t)

    // Laplace-domain references
    std::function<std::complex<double>(std::complex<double>)> exact_trace_ux_lower; // U_x(l1, p)
    std::function<std::complex<double>(double, std::complex<double>)> exact_R;      // R(x, p)
    std::function<std::complex<double>(double, std::complex<double>)> exact_U;      // U(x, p)
};

namespace detail {
inline void check(bool ok, const char* what) {
    if (!ok) throw spec_error(std::string("gallery closed form mismatch: ") + what);
}
} // namespace detail

/// Triangular initial profile on [0, 10] with homogeneous Dirichlet ends,
/// a^2 = 0.25, b = 0, f = 0. Carries the series, the erf closed form of r,
/// the boundary-flux expansion, the trace U_x(0, p) and the piecewise R(x, p).
inline NamedProblem example_6_1() {
    NamedProblem np;
    np.id = "example_6_1";
    np.spec.a = 0.5;
    np.spec.b = 0.0;
    np.spec.l1 = 0.0;
    np.spec.l2 = 10.0;
    np.spec.T = 1.0;
    np.spec.f = SourceFunction::zero();
    np.spec.phi = SpaceFunction::piecewise_linear({0.0, 5.0, 10.0}, {0.0, 2.5, 0.0});
    np.spec.bc1 = BoundaryCondition::dirichlet(TimeFunction::zero());
    np.spec.bc2 = BoundaryCondition::dirichlet(TimeFunction::zero());

    np.series_k = [](double x, double t, int K) {
        double out = 0.0;
        for (int k = K; k >= 1; --k) {
            const double m = 2.0 * k - 1.0;
            const double sgn = (k % 2 == 1) ? 1.0 : -1.0;
            out += 20.0 / (std::numbers::pi * std::numbers::pi) * sgn / (m * m) *
                   std::exp(-m * m * std::numbers::pi * std::numbers::pi * t / 400.0) *
                   std::sin(m * std::numbers::pi * x / 10.0);
        }
        return out;
    };

    np.exact_r = [](double x, double t) {
        const double rt = std::sqrt(t);
        return 0.25 * ((x - 10.0) * std::erf((x - 10.0) / rt) +
                       (10.0 - 2.0 * x) * std::erf((x - 5.0) / rt) + x * std::erf(x / rt)) +
               rt / (4.0 * std::sqrt(std::numbers::pi)) *
                   (-2.0 * std::exp(-(x - 5.0) * (x - 5.0) / t) +
                    std::exp(-(x - 10.0) * (x - 10.0) / t) + std::exp(-x * x / t));
    };

    np.exact_flux_lower = [](double t) {
        const double rt = std::sqrt(t);
        return -0.5 * std::erf(10.0 / rt) + std::erf(5.0 / rt);
    };

    np.exact_trace_ux_lower = [](std::complex<double> p) {
        const std::complex<double> s = std::sqrt(p);
        const std::complex<double> e20 = std::exp(-20.0 * s);
        const std::complex<double> e10 = std::exp(-10.0 * s);
        return -0.5 * (-e20 + 2.0 * e10 - 1.0) / ((e20 + 1.0) * p);
    };

    np.exact_R = [](double x, std::complex<double> p) {
        const std::complex<double> s = std::sqrt(p);
        const std::complex<double> p32 = p * s;
        if (x <= 5.0)
            return -0.125 *
                   (-4.0 * x * s + 2.0 * std::exp(2.0 * (x - 5.0) * s) -
                    std::exp(-2.0 * x * s) - std::exp(2.0 * (x - 10.0) * s)) /
                   p32;
        return -0.125 *
               (4.0 * x * s - 40.0 * s + 2.0 * std::exp(-2.0 * (x - 5.0) * s) -
                std::exp(-2.0 * x * s) - std::exp(2.0 * (x - 10.0) * s)) /
               p32;
    };

    np.exact_U = [trace = np.exact_trace_ux_lower, R = np.exact_R](
                     double x, std::complex<double> p) {
        const std::complex<double> s = std::sqrt(p);
        const std::complex<double> ux0 = trace(p);
        const std::complex<double> ux10 = -ux0;
        return 1.0 / (4.0 * s) *
                   (ux10 * std::exp(-2.0 * (10.0 - x) * s) - ux0 * std::exp(-2.0 * x * s)) +
               R(x, p);
    };

    detail::check(np.spec.phi(5.0) == 2.5, "phi(5) = u0/2");
    detail::check(np.spec.phi(0.0) == 0.0 && np.spec.phi(10.0) == 0.0,
                  "phi vanishes at the ends");
    detail::check(std::abs(np.exact_flux_lower(1e-3) - 0.5) < 1e-12, "flux limit phi'(0) = 1/2");
    return np;
}

/// Semi-infinite constant-data problem (surface temperature ta, initial t0,
/// volumetric source w/(c gamma), b = 0). The reference operational solution
/// is the four-term closed p-form; its term-by-term inversion in erfc form is
/// stored as the time-domain reference.
inline NamedProblem luikov_semi_infinite(double t0, double ta, double w, double c, double gamma,
                                         double a) {
    if (c * gamma == 0.0) throw spec_error("luikov_semi_infinite: c * gamma must be nonzero");
    NamedProblem np;
    np.id = "luikov";
    np.spec.a = a;
    np.spec.b = 0.0;
    np.spec.l1 = 0.0;
    np.spec.l2 = std::numeric_limits<double>::infinity();
    np.spec.T = 10.0;
    np.spec.phi = SpaceFunction::constant(t0);
    np.spec.f = SourceFunction::constant(w / (c * gamma));
    np.spec.bc1 = BoundaryCondition::dirichlet(TimeFunction::constant(ta));
    np.spec.bc2 = BoundaryCondition::none();

    const double q = w / (c * gamma);
    np.exact_R = [t0, q, a](double x, std::complex<double> p) {
        const std::complex<double> ch = std::exp(-x * std::sqrt(p) / a);
        return t0 / p + q / (p * p) - 0.5 * t0 / p * ch - 0.5 * q / (p * p) * ch;
    };
    np.exact_U = [t0, ta, q, a](double x, std::complex<double> p) {
        const std::complex<double> ch = std::exp(-x * std::sqrt(p) / a);
        return t0 / p + q / (p * p) + (ta - t0) / p * ch - q / (p * p) * ch;
    };
    np.exact_u = [t0, ta, q, a](double x, double t) {
        const double k = x / a;
        const double ec = std::erfc(k / (2.0 * std::sqrt(t)));
        // L^{-1}{e^{-k sqrt p} / p^2} = (t + k^2/2) erfc(k/(2 sqrt t))
        //                              - k sqrt(t/pi) e^{-k^2/(4t)}
        const double inv_p2 = (t + 0.5 * k * k) * ec -
                              k * std::sqrt(t / std::numbers::pi) * std::exp(-k * k / (4.0 * t));
        return t0 + q * t + (ta - t0) * ec - q * inv_p2;
    };

    detail::check(std::abs(np.exact_U(0.0, {2.0, 0.0}).real() - ta / 2.0) < 1e-12,
                  "U(0, p) = ta / p");
    return np;
}

/// Zero data on [0, 1]: every pipeline must return the zero field.
inline NamedProblem zero_problem() {
    NamedProblem np;
    np.id = "zero";
    np.spec.a = 1.0;
    np.spec.b = 0.0;
    np.spec.l1 = 0.0;
    np.spec.l2 = 1.0;
    np.spec.T = 1.0;
    np.spec.phi = SpaceFunction::zero();
    np.spec.f = SourceFunction::zero();
    np.spec.bc1 = BoundaryCondition::dirichlet(TimeFunction::zero());
    np.spec.bc2 = BoundaryCondition::dirichlet(TimeFunction::zero());
    np.exact_u = [](double, double) { return 0.0; };
    return np;
}

/// Single Dirichlet eigenmode phi = sin(pi x / L) on [0, L]: the solution is
/// one decaying mode, exact at K = 1.
inline NamedProblem dirichlet_eigenmode(double L = 1.0, double a = 1.0, double b = 0.0) {
    NamedProblem np;
    np.id = "eigenmode";
    np.spec.a = a;
    np.spec.b = b;
    np.spec.l1 = 0.0;
    np.spec.l2 = L;
    np.spec.T = 1.0;
    np.spec.phi =
        SpaceFunction::custom([L](double x) { return std::sin(std::numbers::pi * x / L); });
    np.spec.f = SourceFunction::zero();
    np.spec.bc1 = BoundaryCondition::dirichlet(TimeFunction::zero());
    np.spec.bc2 = BoundaryCondition::dirichlet(TimeFunction::zero());
    const double rate = a * a * std::numbers::pi * std::numbers::pi / (L * L) + b;
    np.exact_u = [L, rate](double x, double t) {
        return std::exp(-rate * t) * std::sin(std::numbers::pi * x / L);
    };
    return np;
}

inline std::vector<std::string> ids() { return {"example_6_1", "luikov", "zero", "eigenmode"}; }

/// Gallery lookup with canonical parameters for the parametric entries.
inline NamedProblem by_id(const std::string& id) {
    if (id == "example_6_1") return example_6_1();
    if (id == "luikov") return luikov_semi_infinite(2.0, 5.0, 3.0, 1.5, 2.0, 0.8);
    if (id == "zero") return zero_problem();
    if (id == "eigenmode") return dirichlet_eigenmode();
    throw spec_error("unknown gallery id: " + id);
}

} // namespace rdst::gallery
