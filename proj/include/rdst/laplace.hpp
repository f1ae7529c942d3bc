#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <type_traits>

#include "rdst/kernels.hpp"
#include "rdst/problem.hpp"
#include "rdst/quadrature.hpp"

namespace rdst {

namespace detail {
template <typename S>
double real_part(const S& v) {
    if constexpr (std::is_same_v<S, double>) return v;
    else return v.real();
}
} // namespace detail

/// chi(x, p) = exp(-x sqrt(b+p) / a), principal branch. Exponents below -745
/// are flushed to an exact zero (IEEE double underflow bound).
template <typename S>
S chi(double x, S p, double a, double b) {
    const S arg = -x * std::sqrt(S(b) + p) / a;
    if (detail::real_part(arg) < -745.0) return S{};
    return std::exp(arg);
}

/// Closed form of det(S) for the 4x4 boundary system. The alpha*beta cross
/// terms carry 1/sqrt(b+p); the printed reduction of the source derivation
/// divides them by b+p, which does not match the determinant of the system
/// matrix (dimension check: a^2 alpha alpha / (b+p) vs a alpha beta / sqrt(b+p)).
template <typename S>
S det_S(const ProblemSpec& spec, S p) {
    const double a = spec.a;
    const double a1 = spec.bc1.alpha, b1 = spec.bc1.beta;
    const double a2 = spec.bc2.alpha, b2 = spec.bc2.beta;
    const S s = std::sqrt(S(spec.b) + p);
    const S bp = S(spec.b) + p;
    const S chi2 = chi(2.0 * spec.length(), p, a, spec.b);
    return -0.25 * (a * a * a1 * a2 / bp - a * a1 * b2 / s + a * a2 * b1 / s) * chi2 +
           0.25 * b1 * b2 * chi2 +
           0.25 * (a * a * a1 * a2 / bp + a * a1 * b2 / s - a * a2 * b1 / s) -
           0.25 * b1 * b2;
}

/// Large-p limit of det(S) (the chi -> 0 part; equal to the determinant of
/// the reduced system used by the short-time expansions).
template <typename S>
S det_S_limit(const ProblemSpec& spec, S p) {
    const double a = spec.a;
    const double a1 = spec.bc1.alpha, b1 = spec.bc1.beta;
    const double a2 = spec.bc2.alpha, b2 = spec.bc2.beta;
    const S s = std::sqrt(S(spec.b) + p);
    const S bp = S(spec.b) + p;
    return 0.25 * (a * a * a1 * a2 / bp + a * a1 * b2 / s - a * a2 * b1 / s) - 0.25 * b1 * b2;
}

template <typename S>
struct BoundaryTraces {
    S u_l1{}, ux_l1{}, u_l2{}, ux_l2{};
};

struct LaplaceQuadTols {
    double rel_tol = 1.0e-13;
    int max_panels = 8000;
};

/// Exact operational solution U(x, p) of the Laplace-domain boundary value
/// problem: assembles the 4x4 trace system (bounded domain) or its 2x2 / 0x0
/// unbounded reductions, with R(x, p) evaluated as a chi-weighted integral of
/// phi and F (the transform pair of the Gaussian kernel).
class OperationalSolution {
public:
    explicit OperationalSolution(ProblemSpec spec, LaplaceQuadTols tols = {})
        : spec_(std::move(spec)), tols_(tols) {
        auto rep = validate(spec_);
        if (!rep.ok()) {
            std::ostringstream msg;
            msg << "invalid problem:";
            for (const auto& v : rep.violations) msg << " [" << v << "]";
            throw spec_error(msg.str());
        }
    }

    const ProblemSpec& spec() const { return spec_; }

    /// R(x, p) = L{r(x, .)}(p)
    ///         = (2 a sqrt(b+p))^{-1} int (phi(xi) + F(xi, p)) chi(|xi - x|, p) dxi.
    template <typename S>
    S R(double x, S p) const {
        const S s = std::sqrt(S(spec_.b) + p);
        const double decay = std::max(detail::real_part(s), 1.0e-300);
        const double reach_cap = 45.0 * spec_.a / decay;
        quad::Options opt;
        opt.rel_tol = tols_.rel_tol;
        opt.max_panels = tols_.max_panels;

        auto one_side = [&](bool below) -> S {
            const double room = below ? x - spec_.l1 : spec_.l2 - x;
            const double up = std::isfinite(room) ? std::min(std::max(room, 0.0), reach_cap)
                                                  : reach_cap;
            if (!(up > 0.0)) return S{};
            std::vector<double> splits;
            for (double bp : spec_.phi.breakpoints()) {
                const double eta = below ? x - bp : bp - x;
                if (eta > 0.0 && eta < up) splits.push_back(eta);
            }
            for (double bp : spec_.f.space_breakpoints()) {
                const double eta = below ? x - bp : bp - x;
                if (eta > 0.0 && eta < up) splits.push_back(eta);
            }
            std::sort(splits.begin(), splits.end());
            const bool with_source = !spec_.f.is_zero();
            auto f = [&](double eta) -> S {
                const double xi = below ? x - eta : x + eta;
                S data = S(spec_.phi(xi));
                if (with_source) data += spec_.f.laplace(xi, p, tols_.rel_tol);
                return data * std::exp(-eta * s / spec_.a);
            };
            return quad::integrate<S>(f, 0.0, up, opt, splits).value;
        };

        return (one_side(true) + one_side(false)) / (2.0 * spec_.a * s);
    }

    /// Boundary traces of the bounded problem, by partial-pivot elimination on
    /// the 4x4 system (mathematically the Cramer expressions).
    template <typename S>
    BoundaryTraces<S> traces(S p) const {
        if (!spec_.bounded())
            throw spec_error("traces: bounded domain required (use value() for unbounded)");
        std::array<std::array<S, 5>, 4> m = system_rows(p);
        solve4(m);
        return BoundaryTraces<S>{m[0][4], m[1][4], m[2][4], m[3][4]};
    }

    /// Residuals of the four system rows for given traces (diagnostic).
    template <typename S>
    std::array<double, 4> trace_residuals(S p, const BoundaryTraces<S>& tr) const {
        std::array<std::array<S, 5>, 4> m = system_rows(p);
        const std::array<S, 4> x{tr.u_l1, tr.ux_l1, tr.u_l2, tr.ux_l2};
        std::array<double, 4> out{};
        for (int i = 0; i < 4; ++i) {
            S acc = -m[i][4];
            for (int j = 0; j < 4; ++j) acc += m[i][j] * x[j];
            out[i] = std::abs(acc);
        }
        return out;
    }

    /// det of the system matrix via the same elimination (test hook for the
    /// closed form).
    template <typename S>
    S determinant_via_elimination(S p) const {
        std::array<std::array<S, 5>, 4> m = system_rows(p);
        S det = S{1.0};
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            if (piv != col) {
                std::swap(m[piv], m[col]);
                det = -det;
            }
            det *= m[col][col];
            if (m[col][col] == S{}) return S{};
            for (int r = col + 1; r < 4; ++r) {
                const S fac = m[r][col] / m[col][col];
                for (int c = col; c < 5; ++c) m[r][c] -= fac * m[col][c];
            }
        }
        return det;
    }

    /// U(x, p): dispatches on the domain kind.
    template <typename S>
    S value(double x, S p) const {
        if (spec_.bounded()) return value_bounded(x, p, traces(p));
        if (!spec_.lower_finite() && !spec_.upper_finite()) return R(x, p); // infinite line
        return value_semi_infinite(x, p);
    }

    /// Eq.-(27) assembly from previously computed traces.
    template <typename S>
    S value_bounded(double x, S p, const BoundaryTraces<S>& tr) const {
        const S s = std::sqrt(S(spec_.b) + p);
        const S chi_up = chi(spec_.l2 - x, p, spec_.a, spec_.b);
        const S chi_lo = chi(x - spec_.l1, p, spec_.a, spec_.b);
        return spec_.a / (2.0 * s) * (tr.ux_l2 * chi_up - tr.ux_l1 * chi_lo) +
               0.5 * (tr.u_l2 * chi_up + tr.u_l1 * chi_lo) + R(x, p);
    }

    /// Semi-infinite reduction: one finite end carrying the boundary
    /// condition, traces bounded at infinity.
    template <typename S>
    S value_semi_infinite(double x, S p) const {
        const bool lower = spec_.lower_finite();
        const double e = lower ? spec_.l1 : spec_.l2;
        const BoundaryCondition& bc = lower ? spec_.bc1 : spec_.bc2;
        const S s = std::sqrt(S(spec_.b) + p);
        const S Re = R(e, p);
        const S G = bc.g.template laplace<S>(p, tols_.rel_tol);
        // rows: [alpha beta | G], [1/2, +/- a/(2s) | R(e,p)]
        const S m10 = S(0.5);
        const S m11 = (lower ? 1.0 : -1.0) * spec_.a / (2.0 * s);
        const S det = bc.alpha * m11 - S(bc.beta) * m10;
        if (std::abs(det) < 1.0e-290)
            throw numeric_error("semi-infinite trace system is singular at this p");
        const S u = (G * m11 - S(bc.beta) * Re) / det;
        const S v = (bc.alpha * Re - m10 * G) / det;
        const S ch = chi(std::abs(x - e), p, spec_.a, spec_.b);
        return 0.5 * u * ch + (lower ? -1.0 : 1.0) * spec_.a / (2.0 * s) * v * ch + R(x, p);
    }

    /// |  -a^2 D^2_h U + (b+p) U - F(x,p) - phi(x) |  with a centered second
    /// difference; O(h^2) plus quadrature noise at interior smooth points.
    double ode_residual(double x, double p, double h) const {
        const double um = value(x - h, p);
        const double uc = value(x, p);
        const double up = value(x + h, p);
        const double d2 = (up - 2.0 * uc + um) / (h * h);
        const double rhs = spec_.f.laplace(x, p, tols_.rel_tol) + spec_.phi(x);
        return std::abs(-spec_.a * spec_.a * d2 + (spec_.b + p) * uc - rhs);
    }

private:
    template <typename S>
    std::array<std::array<S, 5>, 4> system_rows(S p) const {
        const S s = std::sqrt(S(spec_.b) + p);
        const S ch = chi(spec_.length(), p, spec_.a, spec_.b);
        const S a2s = spec_.a / (2.0 * s);
        const S G1 = spec_.bc1.g.template laplace<S>(p, tols_.rel_tol);
        const S G2 = spec_.bc2.g.template laplace<S>(p, tols_.rel_tol);
        const S R1 = R(spec_.l1, p);
        const S R2 = R(spec_.l2, p);
        return {{
            {S(spec_.bc1.alpha), S(spec_.bc1.beta), S{}, S{}, G1},
            {S{}, S{}, S(spec_.bc2.alpha), S(spec_.bc2.beta), G2},
            {S(0.5), a2s, -0.5 * ch, -a2s * ch, R1},
            {-0.5 * ch, a2s * ch, S(0.5), -a2s, R2},
        }};
    }

    template <typename S>
    static void solve4(std::array<std::array<S, 5>, 4>& m) {
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            if (std::abs(m[piv][col]) < 1.0e-300)
                throw numeric_error("boundary trace system is numerically singular");
            if (piv != col) std::swap(m[piv], m[col]);
            for (int r = col + 1; r < 4; ++r) {
                const S fac = m[r][col] / m[col][col];
                for (int c = col; c < 5; ++c) m[r][c] -= fac * m[col][c];
            }
        }
        for (int col = 3; col >= 0; --col) {
            S acc = m[col][4];
            for (int c = col + 1; c < 4; ++c) acc -= m[col][c] * m[c][4];
            m[col][4] = acc / m[col][col];
        }
    }

    ProblemSpec spec_;
    LaplaceQuadTols tols_;
};

} // namespace rdst
