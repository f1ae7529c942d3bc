#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "rdst/chebyshev.hpp"
#include "rdst/kernels.hpp"
#include "rdst/laplace.hpp"
#include "rdst/problem.hpp"
#include "rdst/quadrature.hpp"

namespace rdst {

/// A short-time convolution kernel of the form
///   k(t) = c_rsqrt / sqrt(pi t) + c_one + c_sqrt * sqrt(t / pi),
/// which is what every boundary expansion kernel reduces to. The exact
/// Laplace transform is c_rsqrt p^{-1/2} + c_one p^{-1} + (c_sqrt/2) p^{-3/2}.
struct KernelCoeffs {
    double c_rsqrt = 0.0;
    double c_one = 0.0;
    double c_sqrt = 0.0;

    double operator()(double t) const {
        const double rt = std::sqrt(t);
        return c_rsqrt / (std::sqrt(std::numbers::pi) * rt) + c_one +
               c_sqrt * rt / std::sqrt(std::numbers::pi);
    }

    /// sigma * k(sigma^2): the substitution form, smooth through sigma = 0.
    double times_sigma(double sigma) const {
        return (c_rsqrt + c_sqrt * sigma * sigma) / std::sqrt(std::numbers::pi) +
               c_one * sigma;
    }

    template <typename S>
    S laplace(S p) const {
        const S rp = std::sqrt(S(1.0) / p);
        return c_rsqrt * rp + c_one / p + 0.5 * c_sqrt * rp / p;
    }

    KernelCoeffs operator*(double s) const { return {c_rsqrt * s, c_one * s, c_sqrt * s}; }
};

/// Per-end expansion data. Both ends evaluate through the lower-end formulas
/// with beta_eff = beta at the lower end and beta_eff = -beta at the upper end
/// (the mirror x -> l2 - x maps one end onto the other and flips the flux
/// sign). Shared case items are therefore literally the same code path.
struct EndExpansion {
    bool robin = false;
    double alpha = 0.0;
    double beta_eff = 0.0;
    double flux_sign = 1.0;
    // Robin end: value_g = u^{1l}, value_r = u^{2l}, flux_g = u_x^{1l},
    // flux_r = u_x^{2l} (lower-end orientation).
    KernelCoeffs value_g, value_r, flux_g, flux_r;
    // Dirichlet end: u_x^{l}(t) = (b t + 1) / sqrt(pi t).
    KernelCoeffs dirichlet_flux;
};

/// Case-dependent kernels of the short-time boundary expansions.
struct ExpansionKernels {
    CaseKind kind = CaseKind::DirichletDirichlet;
    double a = 0.0, b = 0.0;
    EndExpansion lower, upper;

    static ExpansionKernels for_spec(const ProblemSpec& spec) {
        ExpansionKernels out;
        out.kind = classify_case(spec);
        out.a = spec.a;
        out.b = spec.b;
        out.lower = make_end(spec, Side::lower);
        out.upper = make_end(spec, Side::upper);
        return out;
    }

private:
    static EndExpansion make_end(const ProblemSpec& spec, Side side) {
        const BoundaryCondition& bc = spec.bc(side);
        EndExpansion e;
        e.alpha = bc.alpha;
        e.beta_eff = side == Side::lower ? bc.beta : -bc.beta;
        e.flux_sign = side == Side::lower ? 1.0 : -1.0;
        e.robin = !beta_effectively_zero(bc);
        const double a = spec.a, b = spec.b;
        e.dirichlet_flux = KernelCoeffs{1.0, 0.0, b};
        if (e.robin) {
            const double al = e.alpha, be = e.beta_eff;
            const double be2 = be * be, be3 = be2 * be, be4 = be3 * be;
            e.value_g = {-a / be, -a * a * al / be2, a * (b * be2 - 2.0 * a * a * al * al) / be3};
            e.value_r = {2.0 * a * al / be, 2.0 * a * a * al * al / be2,
                         2.0 * a * al * (2.0 * a * a * al * al - b * be2) / be3};
            e.flux_g = {a * al / be2, a * a * al * al / be3,
                        a * al * (2.0 * a * a * al * al - b * be2) / be4};
            e.flux_r = {-2.0 * a * al * al / be2, -2.0 * a * a * al * al * al / be3,
                        2.0 * a * al * al * (b * be2 - 2.0 * a * a * al * al) / be4};
        }
        return e;
    }
};

struct ShortTimeConfig {
    double dt = 1.0e-2;          // expansion horizon; t must lie in (0, dt]
    double conv_tol = 1.0e-12;   // relative tolerance of convolution quadrature
    int tab_nodes = 48;          // Chebyshev nodes for the r(end, .) tabulations
    KernelQuadTols kernel_tols{1.0e-13, 1.0e-10, 4000};
};

/// Convolution int_0^t kernel(t - tau) f(tau) dtau for a kernel with a
/// tau^{-1/2} endpoint factor and a smooth f; the substitution s = sigma^2
/// on the kernel argument makes the integrand smooth.
inline double convolve_singular(const std::function<double(double)>& kernel,
                                const TimeFunction& f, double t, double tol = 1.0e-12) {
    if (!(t > 0.0)) throw std::domain_error("convolve_singular: t must be positive");
    quad::Options opt;
    opt.rel_tol = tol;
    auto g = [&](double sigma) {
        const double s = sigma * sigma;
        return 2.0 * sigma * kernel(s) * f(t - s);
    };
    return quad::integrate<double>(g, 0.0, std::sqrt(t), opt).value;
}

struct ConsistencyEntry {
    const char* kernel = "";
    std::vector<double> errors;     // |numerical LIT of t-kernel - full transfer part|
    double decay_exponent = 0.0;    // fitted between the first and last sample
    bool trivially_zero = false;    // both routes vanish (e.g. alpha = 0 kernels)
};

struct ConsistencyReport {
    Side side = Side::lower;
    std::vector<double> p_samples;
    std::vector<ConsistencyEntry> entries;
};

/// Short-time evaluator: interior approximation u^a = r, and the refined
/// boundary value/flux expansions with their convolution kernels. The
/// r(end, .) and r'(end, .) profiles are tabulated once on a Chebyshev grid
/// in sqrt(t) (both are smooth in that variable) and shared read-only.
class ShortTimeSolver {
public:
    explicit ShortTimeSolver(ProblemSpec spec, ShortTimeConfig cfg = {})
        : spec_(std::move(spec)),
          cfg_(cfg),
          r_(spec_, cfg.kernel_tols),
          kernels_(ExpansionKernels::for_spec(spec_)),
          lower_(make_tabs(Side::lower)),
          upper_(make_tabs(Side::upper)) {
        if (!(cfg_.dt > 0.0)) throw spec_error("ShortTimeConfig: dt must be positive");
    }

    const ProblemSpec& spec() const { return spec_; }
    const ExpansionKernels& kernels() const { return kernels_; }
    const RField& r_field() const { return r_; }

    /// u^a(x, t) = r(x, t) on the open interior.
    double interior(double x, double t) const {
        check_t(t);
        if (!(x > spec_.l1 && x < spec_.l2))
            throw std::domain_error("interior: x must lie strictly inside (l1, l2)");
        return r_.value(x, t);
    }

    /// d/dx of the interior approximation.
    double interior_dx(double x, double t) const {
        check_t(t);
        if (!(x > spec_.l1 && x < spec_.l2))
            throw std::domain_error("interior_dx: x must lie strictly inside (l1, l2)");
        return r_.space_derivative(x, t);
    }

    /// u^a(end, t): g/alpha at a Dirichlet end, kernel convolutions plus
    /// 2 r(end, t) at a Robin end.
    double value_at(Side side, double t) const {
        check_t(t);
        check_finite_end(side);
        const EndExpansion& e = end(side);
        const BoundaryCondition& bc = spec_.bc(side);
        if (!e.robin) return bc.g(t) / bc.alpha;
        const EndTabs& tab = tabs(side);
        double out = conv_with_time_fn(e.value_g, bc.g, t);
        out += conv_with_r(e.value_r, tab, t);
        out += 2.0 * r_of_t(tab, t);
        return out;
    }

    /// u_x^a(end, t), case-matched.
    double flux_at(Side side, double t) const {
        check_t(t);
        check_finite_end(side);
        const EndExpansion& e = end(side);
        const BoundaryCondition& bc = spec_.bc(side);
        const EndTabs& tab = tabs(side);
        if (e.robin) {
            double core = bc.g(t) / e.beta_eff;
            core += conv_with_time_fn(e.flux_g, bc.g, t);
            core += conv_with_r(e.flux_r, tab, t);
            core -= 2.0 * (e.alpha / e.beta_eff) * r_of_t(tab, t);
            return e.flux_sign * core;
        }
        // Dirichlet end: consumes g(0), g', r(end, 0), r'(end, .).
        const double lead = -bc.g.value_at_zero() / bc.alpha + 2.0 * tab.r0;
        double core = lead * e.dirichlet_flux(t);
        core += (-1.0 / bc.alpha) * conv_with_derivative_of_g(e.dirichlet_flux, bc.g, t);
        core += 2.0 * conv_with_r_deriv(e.dirichlet_flux, tab, t);
        return e.flux_sign * core / spec_.a;
    }

    /// Verifies that the numerical time-LIT of each closed-form kernel matches
    /// the corresponding full p-domain transfer factor with error decaying
    /// like p^{-2} (the order of the retained expansion).
    ConsistencyReport laplace_consistency_check(Side side,
                                                std::vector<double> p_samples) const {
        const EndExpansion& e = end(side);
        if (!e.robin)
            throw spec_error("laplace_consistency_check: Robin end required");
        ConsistencyReport rep;
        rep.side = side;
        rep.p_samples = p_samples;
        const double a = spec_.a, b = spec_.b;
        const double al = e.alpha, be = e.beta_eff;

        struct Probe {
            const char* name;
            KernelCoeffs k;
            std::function<double(double)> full;
        };
        auto denom = [=](double p) { return be * std::sqrt(b + p) - a * al; };
        const std::vector<Probe> probes = {
            {"U1l", e.value_g, [=](double p) { return -a / denom(p); }},
            {"U2l", e.value_r,
             [=](double p) { return 2.0 * std::sqrt(b + p) * be / denom(p) - 2.0; }},
            {"Ux1l", e.flux_g,
             [=](double p) { return std::sqrt(b + p) / denom(p) - 1.0 / be; }},
            {"Ux2l", e.flux_r,
             [=](double p) {
                 return -2.0 * al * std::sqrt(b + p) / denom(p) + 2.0 * al / be;
             }}};

        for (const auto& pr : probes) {
            ConsistencyEntry entry;
            entry.kernel = pr.name;
            double scale = 0.0;
            for (double p : p_samples) {
                const double lit = numeric_lit(pr.k, p);
                const double full = pr.full(p);
                entry.errors.push_back(std::abs(lit - full));
                scale = std::max(scale, std::abs(full));
            }
            entry.trivially_zero = scale < 1.0e-300;
            if (!entry.trivially_zero && entry.errors.size() >= 2 &&
                entry.errors.front() > 0.0 && entry.errors.back() > 0.0) {
                entry.decay_exponent = std::log(entry.errors.front() / entry.errors.back()) /
                                       std::log(p_samples.back() / p_samples.front());
            }
            rep.entries.push_back(std::move(entry));
        }
        return rep;
    }

    /// r(end, t) through the shared tabulation.
    double boundary_r(Side side, double t) const { return r_of_t(tabs(side), t); }
    double boundary_r_initial(Side side) const { return tabs(side).r0; }

private:
    struct EndTabs {
        double r0 = 0.0;                      // lim_{t->0+} r(end, t)
        std::optional<ChebInterp> r_sigma;    // sigma |-> r(end, sigma^2)
        std::optional<ChebInterp> h_sigma;    // sigma |-> sigma * r'(end, sigma^2)
    };

    static void check_t_static(double t, double dt) {
        if (!(t > 0.0) || t > dt)
            throw std::domain_error("short-time evaluation requires 0 < t <= dt");
    }
    void check_t(double t) const { check_t_static(t, cfg_.dt); }

    void check_finite_end(Side side) const {
        if (!std::isfinite(spec_.end(side)))
            throw std::domain_error("short-time boundary expansion at an infinite endpoint");
    }

    const EndExpansion& end(Side side) const {
        return side == Side::lower ? kernels_.lower : kernels_.upper;
    }
    const EndTabs& tabs(Side side) const { return side == Side::lower ? lower_ : upper_; }

    EndTabs make_tabs(Side side) {
        EndTabs tab;
        if (!std::isfinite(spec_.end(side))) return tab; // unbounded end: unused
        tab.r0 = r_.end_initial(side);
        const double smax = std::sqrt(cfg_.dt);
        tab.r_sigma.emplace([&](double s) { return r_.at_end(side, s * s); }, 0.0, smax,
                            cfg_.tab_nodes);
        tab.h_sigma.emplace([&](double s) { return s * r_.end_time_derivative(side, s * s); },
                            0.0, smax, cfg_.tab_nodes);
        return tab;
    }

    double r_of_t(const EndTabs& tab, double t) const { return (*tab.r_sigma)(std::sqrt(t)); }

    /// int_0^t k(t - tau) g(tau) dtau with smooth g: single substitution on
    /// the kernel argument; sigma * k(sigma^2) is evaluated in closed form.
    double conv_with_time_fn(const KernelCoeffs& k, const TimeFunction& g, double t) const {
        if (g.is_zero()) return 0.0;
        quad::Options opt;
        opt.rel_tol = cfg_.conv_tol;
        auto f = [&](double sigma) { return 2.0 * k.times_sigma(sigma) * g(t - sigma * sigma); };
        return quad::integrate<double>(f, 0.0, std::sqrt(t), opt).value;
    }

    /// Same, with g replaced by its derivative (Dirichlet flux item).
    double conv_with_derivative_of_g(const KernelCoeffs& k, const TimeFunction& g,
                                     double t) const {
        if (g.is_zero()) return 0.0;
        quad::Options opt;
        opt.rel_tol = cfg_.conv_tol;
        auto f = [&](double sigma) {
            return 2.0 * k.times_sigma(sigma) * g.derivative(t - sigma * sigma);
        };
        return quad::integrate<double>(f, 0.0, std::sqrt(t), opt).value;
    }

    /// int_0^t k(t - tau) r(end, tau) dtau. Split at t/2: near tau = t the
    /// kernel substitution applies; near tau = 0 the profile substitution
    /// tau = sigma^2 keeps the sqrt-type profile smooth.
    double conv_with_r(const KernelCoeffs& k, const EndTabs& tab, double t) const {
        quad::Options opt;
        opt.rel_tol = cfg_.conv_tol;
        const double half = std::sqrt(0.5 * t);
        auto near_kernel = [&](double sigma) {
            const double tau = t - sigma * sigma;
            return 2.0 * k.times_sigma(sigma) * (*tab.r_sigma)(std::sqrt(tau));
        };
        auto near_zero = [&](double sigma) {
            return 2.0 * sigma * k(t - sigma * sigma) * (*tab.r_sigma)(sigma);
        };
        return quad::integrate<double>(near_kernel, 0.0, half, opt).value +
               quad::integrate<double>(near_zero, 0.0, half, opt).value;
    }

    /// int_0^t k(t - tau) r'(end, tau) dtau, with r'(sigma^2) = h(sigma)/sigma.
    double conv_with_r_deriv(const KernelCoeffs& k, const EndTabs& tab, double t) const {
        quad::Options opt;
        opt.rel_tol = cfg_.conv_tol;
        const double half = std::sqrt(0.5 * t);
        auto near_kernel = [&](double sigma) {
            const double tau = t - sigma * sigma;
            const double rt = std::sqrt(tau);
            return 2.0 * k.times_sigma(sigma) * (*tab.h_sigma)(rt) / rt;
        };
        auto near_zero = [&](double sigma) {
            return 2.0 * k(t - sigma * sigma) * (*tab.h_sigma)(sigma);
        };
        return quad::integrate<double>(near_kernel, 0.0, half, opt).value +
               quad::integrate<double>(near_zero, 0.0, half, opt).value;
    }

    /// int_0^inf k(t) e^{-pt} dt by quadrature (t = sigma^2), kept numerical
    /// on purpose: it is the independent route against KernelCoeffs::laplace
    /// and the full transfer factors.
    static double numeric_lit(const KernelCoeffs& k, double p) {
        quad::Options opt;
        opt.rel_tol = 1.0e-13;
        const double up = std::sqrt(46.0 / p);
        auto f = [&](double sigma) {
            return 2.0 * k.times_sigma(sigma) * std::exp(-p * sigma * sigma);
        };
        return quad::integrate<double>(f, 0.0, up, opt).value;
    }

    ProblemSpec spec_;
    ShortTimeConfig cfg_;
    RField r_;
    ExpansionKernels kernels_;
    EndTabs lower_, upper_;
};

} // namespace rdst
