#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "rdst/problem.hpp"
#include "rdst/quadrature.hpp"

namespace rdst {

/// Sine-series reference solution for homogeneous-Dirichlet problems with
/// f = 0:
///   u(x,t) = sum_k c_k exp(-(a^2 (k pi / L)^2 + b) t) sin(k pi (x - l1) / L),
///   c_k = (2/L) int phi sin(k pi (xi - l1) / L) dxi   (breakpoint-split quadrature).
///
/// K counts *retained* terms: modes whose coefficient is negligible relative
/// to the largest one contribute nothing and are skipped, so for data with
/// vanishing even modes a K-term sum reaches mode 2K-1 (the usual convention
/// when such series are quoted as "the first K terms").
class SeriesSolution {
public:
    SeriesSolution(const ProblemSpec& spec, int K) : l1_(spec.l1), length_(spec.length()),
                                                     a_(spec.a), b_(spec.b) {
        if (K < 1) throw spec_error("series: K must be at least 1");
        if (!spec.bounded()) throw spec_error("series: bounded interval required");
        if (!beta_effectively_zero(spec.bc1) || !beta_effectively_zero(spec.bc2))
            throw spec_error("series: homogeneous Dirichlet conditions required");
        if (!spec.bc1.g.is_zero() || !spec.bc2.g.is_zero())
            throw spec_error("series: boundary data must be identically zero");
        if (!spec.f.is_zero()) throw spec_error("series: source-free problems only");

        // scale for the negligibility threshold
        double phi_scale = 0.0;
        auto consider = [&](double x) { phi_scale = std::max(phi_scale, std::abs(spec.phi(x))); };
        consider(spec.l1);
        consider(spec.l2);
        consider(0.5 * (spec.l1 + spec.l2));
        for (double bp : spec.phi.breakpoints())
            if (bp >= spec.l1 && bp <= spec.l2) consider(bp);

        quad::Options opt;
        opt.rel_tol = 1.0e-12;
        opt.abs_tol = 1.0e-14 * std::max(phi_scale, 1.0e-300) * length_;
        std::vector<double> splits(spec.phi.breakpoints().begin(),
                                   spec.phi.breakpoints().end());

        const int mode_cap = 8 * K + 128;
        for (int k = 1; static_cast<int>(coeff_.size()) < K && k <= mode_cap; ++k) {
            const double om = k * std::numbers::pi / length_;
            auto f = [&](double xi) { return spec.phi(xi) * std::sin(om * (xi - l1_)); };
            const double ck =
                2.0 / length_ * quad::integrate<double>(f, spec.l1, spec.l2, opt, splits).value;
            if (std::abs(ck) <= 1.0e-12 * phi_scale) continue;
            coeff_.push_back(ck);
            mode_.push_back(k);
        }
    }

    int terms() const { return static_cast<int>(coeff_.size()); }
    const std::vector<double>& coefficients() const { return coeff_; }
    const std::vector<int>& modes() const { return mode_; }

    double operator()(double x, double t) const {
        double out = 0.0;
        for (std::size_t i = coeff_.size(); i-- > 0;) { // small terms first
            const double om = mode_[i] * std::numbers::pi / length_;
            out += coeff_[i] * std::exp(-(a_ * a_ * om * om + b_) * t) * std::sin(om * (x - l1_));
        }
        return out;
    }

    double derivative(double x, double t) const {
        double out = 0.0;
        for (std::size_t i = coeff_.size(); i-- > 0;) {
            const double om = mode_[i] * std::numbers::pi / length_;
            out += coeff_[i] * om * std::exp(-(a_ * a_ * om * om + b_) * t) *
                   std::cos(om * (x - l1_));
        }
        return out;
    }

private:
    double l1_, length_, a_, b_;
    std::vector<double> coeff_;
    std::vector<int> mode_;
};

inline double series_solve(const ProblemSpec& spec, int K, double x, double t) {
    return SeriesSolution(spec, K)(x, t);
}

} // namespace rdst
