#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <variant>
#include <vector>

#include "rdst/errors.hpp"
#include "rdst/field.hpp"

namespace rdst {

/// Real-axis inversion: f(t) ~ (ln2/t) sum_k w_k F(k ln2 / t). The alternating
/// weights grow like 10^{N/1.6}, so the sum is accumulated in long double;
/// N = 14 is the default (round-off and truncation balance near there in
/// double precision).
struct GaverStehfest {
    int N = 14;
};

/// Deformed-contour inversion (fixed Talbot), M nodes. Needs F evaluable at
/// complex p and converges geometrically for transforms analytic off the
/// negative real axis; the method of choice when tight tolerances matter.
struct FixedTalbot {
    int M = 32;
};

using InversionMethod = std::variant<GaverStehfest, FixedTalbot>;

namespace detail {

inline std::vector<long double> stehfest_weights(int N) {
    if (N < 4 || N > 20 || N % 2 != 0)
        throw spec_error("GaverStehfest: N must be even and within [4, 20]");
    std::vector<long double> fact(2 * N + 1, 1.0L);
    for (int i = 1; i <= 2 * N; ++i) fact[i] = fact[i - 1] * i;
    const int half = N / 2;
    std::vector<long double> w(N, 0.0L);
    for (int k = 1; k <= N; ++k) {
        long double s = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
            long double term = 1.0L;
            for (int q = 0; q < half; ++q) term *= j;
            term *= fact[2 * j] /
                    (fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k]);
            s += term;
        }
        w[k - 1] = ((k + half) % 2 == 0 ? s : -s);
    }
    return w;
}

} // namespace detail

/// Gaver-Stehfest inversion of a real-axis transform at time t > 0.
inline double invert(const std::function<double(double)>& F, double t, const GaverStehfest& m) {
    if (!(t > 0.0)) throw std::domain_error("invert: t must be positive");
    const auto w = detail::stehfest_weights(m.N);
    const double ln2t = std::numbers::ln2 / t;
    long double acc = 0.0L;
    for (int k = 1; k <= m.N; ++k) acc += w[k - 1] * static_cast<long double>(F(k * ln2t));
    const double out = static_cast<double>(acc * ln2t);
    if (!std::isfinite(out)) throw numeric_error("Gaver-Stehfest sum is not finite");
    return out;
}

/// Fixed-Talbot inversion; F is sampled on the contour s(th) = r th (cot th + i),
/// r = 2M / (5t).
inline double invert(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
                     const FixedTalbot& m) {
    if (!(t > 0.0)) throw std::domain_error("invert: t must be positive");
    if (m.M < 8) throw spec_error("FixedTalbot: M must be at least 8");
    const double r = 2.0 * m.M / (5.0 * t);
    long double acc = 0.5L * static_cast<long double>((F(std::complex<double>(r, 0.0)) *
                                                       std::exp(r * t))
                                                          .real());
    for (int k = 1; k < m.M; ++k) {
        const double th = k * std::numbers::pi / m.M;
        const double cot = std::cos(th) / std::sin(th);
        const std::complex<double> s(r * th * cot, r * th);
        const double sigma = th + (th * cot - 1.0) * cot;
        const std::complex<double> term =
            std::exp(s * t) * F(s) * std::complex<double>(1.0, sigma);
        acc += static_cast<long double>(term.real());
    }
    const double out = static_cast<double>(acc * r / m.M);
    if (!std::isfinite(out)) throw numeric_error("fixed-Talbot sum is not finite");
    return out;
}

/// Method-dispatching inversion for transforms with a complex-capable
/// evaluator (Gaver-Stehfest samples it on the real axis).
inline double invert(const std::function<std::complex<double>(std::complex<double>)>& F, double t,
                     const InversionMethod& method) {
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GaverStehfest>) {
                return invert([&F](double p) { return F(std::complex<double>(p, 0.0)).real(); },
                              t, m);
            } else {
                return invert(F, t, m);
            }
        },
        method);
}

/// |GS(N) - GS(N-2)| stabilization estimate; a usable error indicator for
/// Gaver-Stehfest results.
inline double stehfest_stabilization(const std::function<double(double)>& F, double t, int N = 14) {
    const double a = invert(F, t, GaverStehfest{N});
    const double b = invert(F, t, GaverStehfest{N - 2});
    return std::abs(a - b);
}

/// Pointwise inversion of a transform family over an (x, t) grid. Per-point
/// failures are recorded in the field's notes (value NaN) rather than thrown.
inline SolutionField invert_grid(
    const std::function<std::complex<double>(double, std::complex<double>)>& F_family,
    std::vector<double> xs, std::vector<double> ts, const InversionMethod& method) {
    for (double t : ts)
        if (!(t > 0.0)) throw std::domain_error("invert_grid: all times must be positive");
    SolutionField field(std::move(xs), std::move(ts), Provenance::operational);
    for (std::size_t it = 0; it < field.ts().size(); ++it) {
        for (std::size_t ix = 0; ix < field.xs().size(); ++ix) {
            const double x = field.xs()[ix];
            try {
                const double v = invert(
                    [&](std::complex<double> p) { return F_family(x, p); }, field.ts()[it],
                    method);
                field.u(ix, it) = v;
            } catch (const std::exception& e) {
                field.u(ix, it) = std::numeric_limits<double>::quiet_NaN();
                field.add_note("inversion failed at x=" + std::to_string(x) +
                               ", t=" + std::to_string(field.ts()[it]) + ": " + e.what());
            }
        }
    }
    return field;
}

} // namespace rdst
