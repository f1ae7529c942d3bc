#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "rdst/problem.hpp"
#include "rdst/quadrature.hpp"

namespace rdst {

/// Damped Gaussian kernel G(x,xi,t) = e^{-bt} e^{-(xi-x)^2/(4a^2 t)} / (2a sqrt(pi t)).
inline double gauss_kernel(double x, double xi, double t, double a, double b) {
    if (!(t > 0.0)) throw std::domain_error("gauss_kernel: t must be positive");
    const double d = xi - x;
    return std::exp(-b * t - d * d / (4.0 * a * a * t)) /
           (2.0 * a * std::sqrt(std::numbers::pi * t));
}

/// dG/dt at separation eta = xi - x.
inline double gauss_kernel_dt(double eta, double t, double a, double b) {
    if (!(t > 0.0)) throw std::domain_error("gauss_kernel_dt: t must be positive");
    const double g = std::exp(-b * t - eta * eta / (4.0 * a * a * t)) /
                     (2.0 * a * std::sqrt(std::numbers::pi * t));
    return g * (-b - 0.5 / t + eta * eta / (4.0 * a * a * t * t));
}

/// dG/dx at separation eta = xi - x (derivative in the field point x).
inline double gauss_kernel_dx(double eta, double t, double a, double b) {
    if (!(t > 0.0)) throw std::domain_error("gauss_kernel_dx: t must be positive");
    const double g = std::exp(-b * t - eta * eta / (4.0 * a * a * t)) /
                     (2.0 * a * std::sqrt(std::numbers::pi * t));
    return g * eta / (2.0 * a * a * t);
}

/// Gamma(t) = L^{-1}{chi(eta, .)}(t) = eta e^{-bt - eta^2/(4a^2 t)} / (2 a sqrt(pi) t^{3/2}).
inline double gamma_inverse_chi(double eta, double t, double a, double b) {
    if (!(eta > 0.0)) throw std::domain_error("gamma_inverse_chi: eta must be positive");
    if (!(t > 0.0)) throw std::domain_error("gamma_inverse_chi: t must be positive");
    return 0.5 * eta * std::exp(-b * t - eta * eta / (4.0 * a * a * t)) /
           (a * std::sqrt(std::numbers::pi) * t * std::sqrt(t));
}

struct KernelQuadTols {
    double phi_rel_tol = 1.0e-10;      // single integral against phi
    double duhamel_rel_tol = 1.0e-8;   // double integral against f
    int max_panels = 4000;
};

/// The inhomogeneity field
///   r(x,t) = int phi(xi) G(x,xi,t) dxi  +  int_0^t int f(xi,th) G(x,xi,t-th) dxi dth
/// evaluated by adaptive quadrature. Endpoint values, endpoint time
/// derivatives and the t -> 0+ endpoint limits are first-class operations
/// because the short-time boundary expansions consume them.
///
/// All spatial integrals run in distance-from-the-evaluation-point
/// coordinates, with a per-end rebased copy of phi for endpoint work. The
/// Gaussian tail is cut at |xi - x| = 12 a sqrt(2t) (relative tail < 1e-31).
class RField {
public:
    explicit RField(ProblemSpec spec, KernelQuadTols tols = {})
        : spec_(std::move(spec)),
          tols_(tols),
          phi_from_lower_(spec_.lower_finite() ? spec_.phi.shifted(spec_.l1)
                                               : SpaceFunction::zero()),
          phi_from_upper_(spec_.upper_finite() ? spec_.phi.reflected(spec_.l2)
                                               : SpaceFunction::zero()) {}

    const ProblemSpec& spec() const { return spec_; }

    /// r(x, t); t > 0, x within the (possibly unbounded) domain.
    double value(double x, double t) const {
        check_t(t);
        double out = phi_part(x, t);
        if (!spec_.f.is_zero()) out += duhamel_part(x, t, /*time_derivative=*/false);
        return out;
    }

    /// dr/dx (x, t), by differentiating the kernel under the integral sign.
    double space_derivative(double x, double t) const {
        check_t(t);
        // d/dx G(|eta|) carries sign(eta): the two half-line integrals get
        // opposite signs.
        double out = 0.0;
        const double w = window(t);
        const double reach_left = reach(x - spec_.l1, w);
        const double reach_right = reach(spec_.l2 - x, w);
        quad::Options opt = phi_opts();
        if (reach_left > 0.0) {
            auto f = [&](double eta) {
                return spec_.phi(x - eta) * gauss_kernel_dx(eta, t, spec_.a, spec_.b);
            };
            out -= quad::integrate<double>(f, 0.0, reach_left, opt,
                                           splits_about(x, reach_left, /*below=*/true))
                       .value;
        }
        if (reach_right > 0.0) {
            auto f = [&](double eta) {
                return spec_.phi(x + eta) * gauss_kernel_dx(eta, t, spec_.a, spec_.b);
            };
            out += quad::integrate<double>(f, 0.0, reach_right, opt,
                                           splits_about(x, reach_right, /*below=*/false))
                       .value;
        }
        if (!spec_.f.is_zero()) out += duhamel_part_dx(x, t);
        return out;
    }

    /// r(end, t) evaluated through the rebased phi, so that mirror-symmetric
    /// problems produce bit-identical values at the two ends.
    double at_end(Side side, double t) const {
        check_t(t);
        check_finite_end(side);
        const double w = window(t);
        const double span = side_span();
        const double up = std::min(w, span);
        const SpaceFunction& ph = rebased(side);
        quad::Options opt = phi_opts();
        auto f = [&](double eta) { return ph(eta) * gauss_weight_eta(eta, t); };
        double out = up > 0.0
                         ? quad::integrate<double>(f, 0.0, up, opt, rebased_splits(side, up)).value
                         : 0.0;
        if (!spec_.f.is_zero()) out += duhamel_part(spec_.end(side), t, false);
        return out;
    }

    /// lim_{t->0+} r(end, t): half the one-sided phi limit at the endpoint.
    double end_initial(Side side) const {
        const double e = spec_.end(side);
        const double v = side == Side::lower ? spec_.phi.value_right(e) : spec_.phi.value_left(e);
        return 0.5 * v;
    }

    /// dr/dt (end, t), with dG/dt taken under the integral sign. The Duhamel
    /// part contributes the half-mass term f(end,t)/2 plus a weakly singular
    /// time integral handled by the substitution t - theta = s^2.
    double end_time_derivative(Side side, double t) const {
        check_t(t);
        check_finite_end(side);
        const double w = window(t);
        const double span = side_span();
        const double up = std::min(w, span);
        const SpaceFunction& ph = rebased(side);
        quad::Options opt = phi_opts();
        auto f = [&](double eta) { return ph(eta) * gauss_kernel_dt(eta, t, spec_.a, spec_.b); };
        double out = up > 0.0
                         ? quad::integrate<double>(f, 0.0, up, opt, rebased_splits(side, up)).value
                         : 0.0;
        if (!spec_.f.is_zero()) {
            const double e = spec_.end(side);
            out += 0.5 * spec_.f(e, t) + duhamel_part(e, t, /*time_derivative=*/true);
        }
        return out;
    }

private:
    static void check_t(double t) {
        if (!(t > 0.0)) throw std::domain_error("RField: t must be positive");
    }

    void check_finite_end(Side side) const {
        if (!std::isfinite(spec_.end(side)))
            throw std::domain_error("RField: endpoint operation at an infinite endpoint");
    }

    quad::Options phi_opts() const {
        quad::Options o;
        o.rel_tol = tols_.phi_rel_tol;
        o.max_panels = tols_.max_panels;
        return o;
    }

    double window(double t) const { return 12.0 * spec_.a * std::sqrt(2.0 * t); }

    static double reach(double side_room, double w) {
        if (!std::isfinite(side_room)) return w;
        return std::min(std::max(side_room, 0.0), w);
    }

    double side_span() const {
        const double span = spec_.l2 - spec_.l1;
        return std::isfinite(span) ? span : std::numeric_limits<double>::infinity();
    }

    const SpaceFunction& rebased(Side side) const {
        return side == Side::lower ? phi_from_lower_ : phi_from_upper_;
    }

    /// Breakpoints of phi in |xi - x| coordinates on one side of x.
    std::vector<double> splits_about(double x, double up, bool below) const {
        std::vector<double> out;
        for (double bp : spec_.phi.breakpoints()) {
            const double eta = below ? x - bp : bp - x;
            if (eta > 0.0 && eta < up) out.push_back(eta);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<double> rebased_splits(Side side, double up) const {
        std::vector<double> out;
        for (double bp : rebased(side).breakpoints())
            if (bp > 0.0 && bp < up) out.push_back(bp);
        return out;
    }

    double gauss_weight_eta(double eta, double t) const {
        return std::exp(-spec_.b * t - eta * eta / (4.0 * spec_.a * spec_.a * t)) /
               (2.0 * spec_.a * std::sqrt(std::numbers::pi * t));
    }

    double phi_part(double x, double t) const {
        const double w = window(t);
        const double reach_left = reach(x - spec_.l1, w);
        const double reach_right = reach(spec_.l2 - x, w);
        quad::Options opt = phi_opts();
        double out = 0.0;
        if (reach_left > 0.0) {
            auto f = [&](double eta) { return spec_.phi(x - eta) * gauss_weight_eta(eta, t); };
            out += quad::integrate<double>(f, 0.0, reach_left, opt,
                                           splits_about(x, reach_left, true))
                       .value;
        }
        if (reach_right > 0.0) {
            auto f = [&](double eta) { return spec_.phi(x + eta) * gauss_weight_eta(eta, t); };
            out += quad::integrate<double>(f, 0.0, reach_right, opt,
                                           splits_about(x, reach_right, false))
                       .value;
        }
        return out;
    }

    /// Duhamel term int_0^t Inner(tau) dtau with tau = t - theta and the
    /// sqrt(tau) endpoint singularity removed by tau = s^2. With
    /// time_derivative set, the inner kernel is dG/dt instead of G (the
    /// boundary term f(end,t)/2 is added by the caller).
    double duhamel_part(double x, double t, bool time_derivative) const {
        quad::Options outer;
        outer.rel_tol = tols_.duhamel_rel_tol;
        outer.max_panels = tols_.max_panels;
        quad::Options inner;
        inner.rel_tol = 0.1 * tols_.duhamel_rel_tol;
        inner.max_panels = tols_.max_panels;

        auto inner_int = [&](double tau) {
            const double w = window(tau);
            const double reach_left = reach(x - spec_.l1, w);
            const double reach_right = reach(spec_.l2 - x, w);
            const double theta = t - tau;
            double v = 0.0;
            if (reach_left > 0.0) {
                auto f = [&](double eta) {
                    const double k = time_derivative
                                         ? gauss_kernel_dt(eta, tau, spec_.a, spec_.b)
                                         : gauss_weight_eta(eta, tau);
                    return spec_.f(x - eta, theta) * k;
                };
                v += quad::integrate<double>(f, 0.0, reach_left, inner,
                                             source_splits(x, reach_left, true))
                         .value;
            }
            if (reach_right > 0.0) {
                auto f = [&](double eta) {
                    const double k = time_derivative
                                         ? gauss_kernel_dt(eta, tau, spec_.a, spec_.b)
                                         : gauss_weight_eta(eta, tau);
                    return spec_.f(x + eta, theta) * k;
                };
                v += quad::integrate<double>(f, 0.0, reach_right, inner,
                                             source_splits(x, reach_right, false))
                         .value;
            }
            return v;
        };
        auto g = [&](double s) { return 2.0 * s * inner_int(s * s); };
        return quad::integrate<double>(g, 0.0, std::sqrt(t), outer).value;
    }

    double duhamel_part_dx(double x, double t) const {
        quad::Options outer;
        outer.rel_tol = tols_.duhamel_rel_tol;
        outer.max_panels = tols_.max_panels;
        quad::Options inner;
        inner.rel_tol = 0.1 * tols_.duhamel_rel_tol;
        inner.max_panels = tols_.max_panels;

        auto inner_int = [&](double tau) {
            const double w = window(tau);
            const double reach_left = reach(x - spec_.l1, w);
            const double reach_right = reach(spec_.l2 - x, w);
            const double theta = t - tau;
            double v = 0.0;
            if (reach_left > 0.0) {
                auto f = [&](double eta) {
                    return spec_.f(x - eta, theta) * gauss_kernel_dx(eta, tau, spec_.a, spec_.b);
                };
                v -= quad::integrate<double>(f, 0.0, reach_left, inner,
                                             source_splits(x, reach_left, true))
                         .value;
            }
            if (reach_right > 0.0) {
                auto f = [&](double eta) {
                    return spec_.f(x + eta, theta) * gauss_kernel_dx(eta, tau, spec_.a, spec_.b);
                };
                v += quad::integrate<double>(f, 0.0, reach_right, inner,
                                             source_splits(x, reach_right, false))
                         .value;
            }
            return v;
        };
        auto g = [&](double s) { return 2.0 * s * inner_int(s * s); };
        return quad::integrate<double>(g, 0.0, std::sqrt(t), outer).value;
    }

    std::vector<double> source_splits(double x, double up, bool below) const {
        std::vector<double> out;
        for (double bp : spec_.f.space_breakpoints()) {
            const double eta = below ? x - bp : bp - x;
            if (eta > 0.0 && eta < up) out.push_back(eta);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    ProblemSpec spec_;
    KernelQuadTols tols_;
    SpaceFunction phi_from_lower_;
    SpaceFunction phi_from_upper_;
};

} // namespace rdst
