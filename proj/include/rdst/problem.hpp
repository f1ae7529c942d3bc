#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rdst/functions.hpp"

namespace rdst {

enum class Side { lower, upper };

inline Side opposite(Side s) { return s == Side::lower ? Side::upper : Side::lower; }

/// One boundary condition alpha*u + beta*u_x = g at an endpoint.
struct BoundaryCondition {
    double alpha = 0.0;
    double beta = 0.0;
    TimeFunction g;

    static BoundaryCondition dirichlet(TimeFunction g, double alpha = 1.0) {
        return {alpha, 0.0, std::move(g)};
    }
    static BoundaryCondition neumann(TimeFunction g, double beta = 1.0) {
        return {0.0, beta, std::move(g)};
    }
    static BoundaryCondition robin(double alpha, double beta, TimeFunction g) {
        return {alpha, beta, std::move(g)};
    }
    /// Placeholder for an endpoint at infinity, where no condition is imposed.
    static BoundaryCondition none() { return {0.0, 0.0, TimeFunction::zero()}; }

    bool is_none() const { return alpha == 0.0 && beta == 0.0; }
};

/// Relative threshold under which beta is treated as exactly zero. The case
/// split of the short-time expansions is discontinuous in beta, so the rule
/// must be explicit and reproducible.
inline constexpr double kBetaZeroRelTol = 1.0e-12;

inline bool beta_effectively_zero(const BoundaryCondition& bc) {
    const double scale = std::max(std::abs(bc.alpha), std::abs(bc.beta));
    return std::abs(bc.beta) <= kBetaZeroRelTol * scale;
}

enum class CaseKind { RobinRobin, RobinDirichlet, DirichletRobin, DirichletDirichlet };

inline const char* to_string(CaseKind k) {
    switch (k) {
        case CaseKind::RobinRobin: return "RobinRobin";
        case CaseKind::RobinDirichlet: return "RobinDirichlet";
        case CaseKind::DirichletRobin: return "DirichletRobin";
        case CaseKind::DirichletDirichlet: return "DirichletDirichlet";
    }
    return "?";
}

/// The initial-boundary-value problem
///   u_t - a^2 u_xx + b u = f(x,t)   on (l1,l2) x (0,T],
///   u(x,0) = phi(x),
///   alpha_i u + beta_i u_x = g_i(t) at the endpoints.
/// Endpoints may be -inf / +inf; the condition at an infinite endpoint must be
/// BoundaryCondition::none().
struct ProblemSpec {
    double a = 1.0;  // diffusion coefficient, a > 0
    double b = 0.0;  // reaction rate, b >= 0
    double l1 = 0.0;
    double l2 = 1.0;
    double T = 1.0;
    SourceFunction f;
    SpaceFunction phi;
    BoundaryCondition bc1;
    BoundaryCondition bc2;

    double length() const { return l2 - l1; }
    bool lower_finite() const { return std::isfinite(l1); }
    bool upper_finite() const { return std::isfinite(l2); }
    bool bounded() const { return lower_finite() && upper_finite(); }

    double end(Side s) const { return s == Side::lower ? l1 : l2; }
    const BoundaryCondition& bc(Side s) const { return s == Side::lower ? bc1 : bc2; }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const ProblemSpec& spec) {
    ValidationReport rep;
    auto fail = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };

    if (!(spec.a > 0.0) || !std::isfinite(spec.a)) fail("diffusion coefficient a must be positive");
    if (!(spec.b >= 0.0) || !std::isfinite(spec.b)) fail("reaction rate b must be nonnegative");
    if (!(spec.l1 < spec.l2)) fail("empty interval: l1 < l2 required");
    if (!(spec.T > 0.0)) fail("horizon T must be positive");

    auto check_bc = [&](const BoundaryCondition& bc, bool finite_end, const char* name) {
        if (!finite_end) {
            if (!bc.is_none())
                fail(std::string(name) + ": no boundary condition may be imposed at an infinite endpoint");
            return;
        }
        const double scale = std::max(std::abs(bc.alpha), std::abs(bc.beta));
        if (!(scale > 1.0e-290) || !std::isfinite(bc.alpha) || !std::isfinite(bc.beta))
            fail(std::string(name) + " degenerate: alpha^2 + beta^2 must be nonzero");
    };
    check_bc(spec.bc1, spec.lower_finite(), "bc1");
    check_bc(spec.bc2, spec.upper_finite(), "bc2");

    for (double bp : spec.phi.breakpoints()) {
        if (bp < spec.l1 - 1e-12 * std::abs(spec.l1) || bp > spec.l2 + 1e-12 * std::abs(spec.l2)) {
            if (std::isfinite(spec.l1) && std::isfinite(spec.l2))
                fail("phi breakpoint outside [l1, l2]");
            break;
        }
    }
    return rep;
}

/// Case split of the short-time expansions, driven by which betas vanish.
inline CaseKind classify_case(const ProblemSpec& spec) {
    const bool d1 = beta_effectively_zero(spec.bc1);
    const bool d2 = beta_effectively_zero(spec.bc2);
    if (d1 && d2) return CaseKind::DirichletDirichlet;
    if (!d1 && d2) return CaseKind::RobinDirichlet;
    if (d1 && !d2) return CaseKind::DirichletRobin;
    return CaseKind::RobinRobin;
}

} // namespace rdst
