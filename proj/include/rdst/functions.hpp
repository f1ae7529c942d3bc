#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "rdst/errors.hpp"
#include "rdst/quadrature.hpp"

namespace rdst {

namespace detail {

inline double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

inline double poly_eval_derivative(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) v = v * x + c[i] * static_cast<double>(i);
    return v;
}

/// Coefficients of x |-> p(pivot - x) given p's coefficients.
inline std::vector<double> poly_reflect(const std::vector<double>& c, double pivot) {
    const std::size_t n = c.size();
    std::vector<double> out(n, 0.0);
    // binomial expansion of sum_j c_j (pivot - x)^j
    for (std::size_t j = 0; j < n; ++j) {
        double binom = 1.0;                // C(j, k)
        double pw = std::pow(pivot, static_cast<double>(j));
        for (std::size_t k = 0; k <= j; ++k) {
            out[k] += c[j] * binom * pw * ((k % 2 == 0) ? 1.0 : -1.0);
            binom *= static_cast<double>(j - k) / static_cast<double>(k + 1);
            if (pivot != 0.0) pw /= pivot;
            else pw = (k + 1 == j) ? 1.0 : 0.0;
        }
    }
    return out;
}

} // namespace detail

/// Boundary datum g(t): value, derivative and g(0) supplied together, never
/// differenced numerically. Laplace transforms are analytic for the structured
/// variants and fall back to quadrature for custom callables.
class TimeFunction {
    struct Zero {};
    struct Poly {
        std::vector<double> c; // sum c_k t^k
    };
    struct Table {
        std::vector<double> t, v; // piecewise linear, held constant after the last node
    };
    struct Custom {
        std::function<double(double)> value;
        std::function<double(double)> deriv;
    };
    using Repr = std::variant<Zero, Poly, Table, Custom>;

public:
    TimeFunction() : repr_(Zero{}) {}

    static TimeFunction zero() { return TimeFunction(Zero{}); }
    static TimeFunction constant(double c) { return TimeFunction(Poly{{c}}); }
    static TimeFunction polynomial(std::vector<double> coeffs) {
        return TimeFunction(Poly{std::move(coeffs)});
    }
    static TimeFunction table(std::vector<double> t, std::vector<double> v) {
        if (t.size() != v.size() || t.size() < 2 || !std::is_sorted(t.begin(), t.end()))
            throw spec_error("TimeFunction::table needs sorted t and matching v");
        return TimeFunction(Table{std::move(t), std::move(v)});
    }
    static TimeFunction custom(std::function<double(double)> value,
                               std::function<double(double)> derivative) {
        return TimeFunction(Custom{std::move(value), std::move(derivative)});
    }

    double operator()(double t) const {
        return std::visit(
            [t](const auto& r) -> double {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, Zero>) return 0.0;
                else if constexpr (std::is_same_v<R, Poly>) return detail::poly_eval(r.c, t);
                else if constexpr (std::is_same_v<R, Table>) return table_value(r, t);
                else return r.value(t);
            },
            repr_);
    }

    double derivative(double t) const {
        return std::visit(
            [t](const auto& r) -> double {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, Zero>) return 0.0;
                else if constexpr (std::is_same_v<R, Poly>) return detail::poly_eval_derivative(r.c, t);
                else if constexpr (std::is_same_v<R, Table>) return table_slope(r, t);
                else return r.deriv(t);
            },
            repr_);
    }

    double value_at_zero() const { return (*this)(0.0); }

    bool is_zero() const {
        if (std::holds_alternative<Zero>(repr_)) return true;
        if (const auto* p = std::get_if<Poly>(&repr_))
            return std::all_of(p->c.begin(), p->c.end(), [](double c) { return c == 0.0; });
        if (const auto* tb = std::get_if<Table>(&repr_))
            return std::all_of(tb->v.begin(), tb->v.end(), [](double v) { return v == 0.0; });
        return false;
    }

    /// L{g}(p). Exact for zero / polynomial / table data; adaptive time
    /// quadrature for custom callables (p with positive real part).
    template <typename S>
    S laplace(S p, double rel_tol = 1.0e-13) const {
        return std::visit(
            [&](const auto& r) -> S {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, Zero>) {
                    return S{};
                } else if constexpr (std::is_same_v<R, Poly>) {
                    // L{t^k} = k!/p^{k+1}
                    S out{};
                    S pk = S{1.0} / p;
                    double fact = 1.0;
                    for (std::size_t k = 0; k < r.c.size(); ++k) {
                        if (k > 0) fact *= static_cast<double>(k);
                        out += r.c[k] * fact * pk;
                        pk /= p;
                    }
                    return out;
                } else if constexpr (std::is_same_v<R, Table>) {
                    // f(t) = v0 + sum_j ds_j (t - t_j)_+ with slope steps ds_j,
                    // so L{f} = v0/p + sum_j ds_j e^{-p t_j} / p^2.
                    S out = r.v.front() / p;
                    const S p2 = p * p;
                    double prev_slope = 0.0;
                    for (std::size_t j = 0; j + 1 < r.t.size(); ++j) {
                        const double dt = r.t[j + 1] - r.t[j];
                        const double slope = dt > 0.0 ? (r.v[j + 1] - r.v[j]) / dt : 0.0;
                        if (dt > 0.0) {
                            out += (slope - prev_slope) * std::exp(-p * r.t[j]) / p2;
                            prev_slope = slope;
                        }
                    }
                    out += (0.0 - prev_slope) * std::exp(-p * r.t.back()) / p2;
                    return out;
                } else {
                    const double gamma = std::real(p);
                    if (!(gamma > 0.0)) throw numeric_error("laplace: Re p must be positive");
                    const double horizon = 45.0 / gamma;
                    const std::array<double, 3> splits = {horizon / 64.0, horizon / 16.0,
                                                          horizon / 4.0};
                    quad::Options opt;
                    opt.rel_tol = rel_tol;
                    auto res = quad::integrate<S>(
                        [&](double t) { return S(r.value(t)) * std::exp(-p * t); }, 0.0,
                        horizon, opt, splits);
                    return res.value;
                }
            },
            repr_);
    }

private:
    explicit TimeFunction(Repr r) : repr_(std::move(r)) {}

    static double table_value(const Table& r, double t) {
        if (t <= r.t.front()) return r.v.front();
        if (t >= r.t.back()) return r.v.back();
        const auto it = std::upper_bound(r.t.begin(), r.t.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - r.t.begin()) - 1;
        const double dt = r.t[i + 1] - r.t[i];
        if (dt == 0.0) return r.v[i + 1];
        return r.v[i] + (r.v[i + 1] - r.v[i]) * ((t - r.t[i]) / dt);
    }

    static double table_slope(const Table& r, double t) {
        if (t < r.t.front() || t >= r.t.back()) return 0.0;
        const auto it = std::upper_bound(r.t.begin(), r.t.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - r.t.begin()) - 1;
        const double dt = r.t[i + 1] - r.t[i];
        return dt == 0.0 ? 0.0 : (r.v[i + 1] - r.v[i]) / dt;
    }

    Repr repr_;
};

/// Initial datum phi(x): piecewise continuous with declared breakpoints so
/// quadrature can split at kinks. reflected() produces x |-> phi(pivot - x)
/// as a first-class object: endpoint integrals run in distance-from-boundary
/// coordinates, and for mirror-symmetric data the reflected representation is
/// bit-identical to the direct one.
class SpaceFunction {
    struct Poly {
        std::vector<double> c;
    };
    struct Table {
        std::vector<double> x, v; // duplicated abscissae encode jumps
    };
    struct Custom {
        std::function<double(double)> value;
        std::vector<double> breakpoints;
    };
    using Repr = std::variant<Poly, Table, Custom>;

public:
    SpaceFunction() : repr_(Poly{{0.0}}) {}

    static SpaceFunction zero() { return SpaceFunction(Poly{{0.0}}); }
    static SpaceFunction constant(double c) { return SpaceFunction(Poly{{c}}); }
    static SpaceFunction polynomial(std::vector<double> coeffs) {
        return SpaceFunction(Poly{std::move(coeffs)});
    }
    static SpaceFunction piecewise_linear(std::vector<double> xs, std::vector<double> vs) {
        if (xs.size() != vs.size() || xs.size() < 2 || !std::is_sorted(xs.begin(), xs.end()))
            throw spec_error("SpaceFunction::piecewise_linear needs sorted x and matching v");
        return SpaceFunction(Table{std::move(xs), std::move(vs)});
    }
    static SpaceFunction custom(std::function<double(double)> value,
                                std::vector<double> breakpoints = {}) {
        std::sort(breakpoints.begin(), breakpoints.end());
        return SpaceFunction(Custom{std::move(value), std::move(breakpoints)});
    }

    double operator()(double x) const { return eval(x, /*from_left=*/false); }
    double value_left(double x) const { return eval(x, /*from_left=*/true); }
    double value_right(double x) const { return eval(x, /*from_left=*/false); }

    const std::vector<double>& breakpoints() const {
        if (const auto* t = std::get_if<Table>(&repr_)) return t->x;
        if (const auto* c = std::get_if<Custom>(&repr_)) return c->breakpoints;
        static const std::vector<double> none;
        return none;
    }

    bool is_zero() const {
        if (const auto* p = std::get_if<Poly>(&repr_))
            return std::all_of(p->c.begin(), p->c.end(), [](double c) { return c == 0.0; });
        if (const auto* t = std::get_if<Table>(&repr_))
            return std::all_of(t->v.begin(), t->v.end(), [](double v) { return v == 0.0; });
        return false;
    }

    SpaceFunction reflected(double pivot) const {
        return std::visit(
            [&](const auto& r) -> SpaceFunction {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, Poly>) {
                    return SpaceFunction(Poly{detail::poly_reflect(r.c, pivot)});
                } else if constexpr (std::is_same_v<R, Table>) {
                    Table out;
                    out.x.reserve(r.x.size());
                    out.v.reserve(r.v.size());
                    for (std::size_t i = r.x.size(); i-- > 0;) {
                        out.x.push_back(pivot - r.x[i]);
                        out.v.push_back(r.v[i]);
                    }
                    return SpaceFunction(std::move(out));
                } else {
                    Custom out;
                    auto f = r.value;
                    out.value = [f, pivot](double x) { return f(pivot - x); };
                    for (std::size_t i = r.breakpoints.size(); i-- > 0;)
                        out.breakpoints.push_back(pivot - r.breakpoints[i]);
                    return SpaceFunction(std::move(out));
                }
            },
            repr_);
    }

    /// Shifted copy: x |-> phi(offset + x).
    SpaceFunction shifted(double offset) const {
        if (offset == 0.0) return *this;
        return std::visit(
            [&](const auto& r) -> SpaceFunction {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, Poly>) {
                    // p(offset + x) = reflect(reflect(p, 0), -offset) is clumsy;
                    // do the binomial shift directly via reflection twice.
                    auto neg = detail::poly_reflect(r.c, 0.0);   // p(-x)
                    auto out = detail::poly_reflect(neg, -offset); // p(offset + x)
                    return SpaceFunction(Poly{std::move(out)});
                } else if constexpr (std::is_same_v<R, Table>) {
                    Table out = r;
                    for (auto& x : out.x) x -= offset;
                    return SpaceFunction(std::move(out));
                } else {
                    Custom out;
                    auto f = r.value;
                    const double off = offset;
                    out.value = [f, off](double x) { return f(off + x); };
                    for (double b : r.breakpoints) out.breakpoints.push_back(b - offset);
                    return SpaceFunction(std::move(out));
                }
            },
            repr_);
    }

private:
    explicit SpaceFunction(Repr r) : repr_(std::move(r)) {}

    double eval(double x, bool from_left) const {
        return std::visit(
            [&](const auto& r) -> double {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, Poly>) {
                    return detail::poly_eval(r.c, x);
                } else if constexpr (std::is_same_v<R, Table>) {
                    if (x <= r.x.front()) return r.v.front();
                    if (x >= r.x.back()) return r.v.back();
                    if (from_left) {
                        // first node >= x; at a duplicated node this is the left value
                        const auto it = std::lower_bound(r.x.begin(), r.x.end(), x);
                        const std::size_t i = static_cast<std::size_t>(it - r.x.begin());
                        if (r.x[i] == x) return r.v[i];
                        const double dx = r.x[i] - r.x[i - 1];
                        if (dx == 0.0) return r.v[i];
                        return r.v[i - 1] + (r.v[i] - r.v[i - 1]) * ((x - r.x[i - 1]) / dx);
                    }
                    // last node <= x; at a duplicated node this lands on the right value
                    const auto it = std::upper_bound(r.x.begin(), r.x.end(), x);
                    const std::size_t i = static_cast<std::size_t>(it - r.x.begin()) - 1;
                    const double dx = r.x[i + 1] - r.x[i];
                    if (dx == 0.0) return r.v[i + 1];
                    return r.v[i] + (r.v[i + 1] - r.v[i]) * ((x - r.x[i]) / dx);
                } else {
                    return r.value(x);
                }
            },
            repr_);
    }

    Repr repr_;
};

/// Source term f(x, t) with an optional analytic Laplace transform in t.
/// Structured variants (zero / constant / separable) transform exactly.
class SourceFunction {
    struct Zero {};
    struct Separable {
        SpaceFunction space;
        TimeFunction time;
    };
    struct Custom {
        std::function<double(double, double)> value;
        std::function<double(double, double)> laplace; // optional, real p
    };
    using Repr = std::variant<Zero, Separable, Custom>;

public:
    SourceFunction() : repr_(Zero{}) {}

    static SourceFunction zero() { return SourceFunction(Zero{}); }
    static SourceFunction constant(double c) {
        return SourceFunction(Separable{SpaceFunction::constant(c), TimeFunction::constant(1.0)});
    }
    static SourceFunction separable(SpaceFunction space, TimeFunction time) {
        return SourceFunction(Separable{std::move(space), std::move(time)});
    }
    static SourceFunction custom(std::function<double(double, double)> value,
                                 std::function<double(double, double)> laplace_value = nullptr) {
        return SourceFunction(Custom{std::move(value), std::move(laplace_value)});
    }

    double operator()(double x, double t) const {
        return std::visit(
            [&](const auto& r) -> double {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, Zero>) return 0.0;
                else if constexpr (std::is_same_v<R, Separable>) return r.space(x) * r.time(t);
                else return r.value(x, t);
            },
            repr_);
    }

    bool is_zero() const {
        if (std::holds_alternative<Zero>(repr_)) return true;
        if (const auto* s = std::get_if<Separable>(&repr_))
            return s->space.is_zero() || s->time.is_zero();
        return false;
    }

    /// Spatial kinks of x |-> f(x, .), for quadrature splitting.
    const std::vector<double>& space_breakpoints() const {
        if (const auto* s = std::get_if<Separable>(&repr_)) return s->space.breakpoints();
        static const std::vector<double> none;
        return none;
    }

    /// F(x, p) = L{f(x, .)}(p).
    template <typename S>
    S laplace(double x, S p, double rel_tol = 1.0e-13) const {
        return std::visit(
            [&](const auto& r) -> S {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, Zero>) {
                    return S{};
                } else if constexpr (std::is_same_v<R, Separable>) {
                    return r.space(x) * r.time.template laplace<S>(p, rel_tol);
                } else {
                    if constexpr (std::is_same_v<S, double>) {
                        if (r.laplace) return r.laplace(x, p);
                    }
                    const double gamma = std::real(p);
                    if (!(gamma > 0.0)) throw numeric_error("laplace: Re p must be positive");
                    const double horizon = 45.0 / gamma;
                    const std::array<double, 3> splits = {horizon / 64.0, horizon / 16.0,
                                                          horizon / 4.0};
                    quad::Options opt;
                    opt.rel_tol = rel_tol;
                    auto fn = r.value;
                    auto res = quad::integrate<S>(
                        [&, fn](double t) { return S(fn(x, t)) * std::exp(-p * t); }, 0.0,
                        horizon, opt, splits);
                    return res.value;
                }
            },
            repr_);
    }

private:
    explicit SourceFunction(Repr r) : repr_(std::move(r)) {}
    Repr repr_;
};

} // namespace rdst
