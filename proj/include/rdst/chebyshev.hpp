#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace rdst {

/// Barycentric interpolant on Chebyshev nodes of the first kind over [lo, hi].
/// First-kind nodes are strictly interior, so the sampled function never has
/// to be evaluated at the interval endpoints.
class ChebInterp {
public:
    template <typename F>
    ChebInterp(F&& f, double lo, double hi, int n) : lo_(lo), hi_(hi) {
        nodes_.resize(n);
        vals_.resize(n);
        wts_.resize(n);
        const double c = 0.5 * (lo + hi);
        const double h = 0.5 * (hi - lo);
        for (int k = 0; k < n; ++k) {
            const double theta = std::numbers::pi * (2.0 * k + 1.0) / (2.0 * n);
            nodes_[k] = c + h * std::cos(theta);
            vals_[k] = f(nodes_[k]);
            wts_[k] = (k % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
        }
    }

    double operator()(double x) const {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const double d = x - nodes_[k];
            if (d == 0.0) return vals_[k];
            const double q = wts_[k] / d;
            num += q * vals_[k];
            den += q;
        }
        return num / den;
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double lo_, hi_;
    std::vector<double> nodes_, vals_, wts_;
};

} // namespace rdst
