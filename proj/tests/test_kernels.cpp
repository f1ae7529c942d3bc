#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "rdst/gallery.hpp"
#include "rdst/kernels.hpp"
#include "rdst/quadrature.hpp"

using namespace rdst;

TEST_CASE("gauss kernel pointwise values") {
    // peak value 1/(2 a sqrt(pi t))
    CHECK(gauss_kernel(3.0, 3.0, 1.0, 0.5, 0.0) ==
          Catch::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(gauss_kernel(0.0, 0.0, 2.0, 1.0, 1.0) ==
          Catch::Approx(std::exp(-2.0) / (2.0 * std::sqrt(2.0 * std::numbers::pi)))
              .epsilon(1e-15));
    CHECK_THROWS_AS(gauss_kernel(0.0, 0.0, 0.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(gauss_kernel(0.0, 0.0, -1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("gauss kernel mass is exp(-bt) for every t") {
    quad::Options opt;
    opt.rel_tol = 1e-12;
    for (double b : {0.0, 1.0, 4.0}) {
        for (double t : {0.01, 0.5, 2.0}) {
            const double a = 0.7;
            const double w = 12.0 * a * std::sqrt(2.0 * t);
            auto r = quad::integrate<double>(
                [&](double xi) { return gauss_kernel(0.3, xi, t, a, b); }, 0.3 - w, 0.3 + w, opt);
            CHECK(r.value == Catch::Approx(std::exp(-b * t)).epsilon(1e-10));
        }
    }
}

TEST_CASE("gamma_inverse_chi closed form") {
    CHECK(gamma_inverse_chi(1.0, 1.0, 1.0, 0.0) ==
          Catch::Approx(std::exp(-0.25) / (2.0 * std::sqrt(std::numbers::pi))).epsilon(1e-15));
    // vanishes faster than any power of t at t -> 0
    CHECK(gamma_inverse_chi(1.0, 1e-4, 1.0, 0.0) == 0.0); // underflows: ~ e^{-2500}
    CHECK(gamma_inverse_chi(1.0, 1e-2, 1.0, 0.0) < 1e-8); // already below every t^n scale
    // reaction damping is a pure exp(-bt) factor
    const double t = 0.37;
    CHECK(gamma_inverse_chi(2.0, t, 1.3, 2.0) ==
          Catch::Approx(gamma_inverse_chi(2.0, t, 1.3, 0.0) * std::exp(-2.0 * t))
              .epsilon(1e-14));
    CHECK_THROWS_AS(gamma_inverse_chi(0.0, 1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_inverse_chi(1.0, 0.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("r field reproduces the worked-example closed form") {
    auto np = gallery::example_6_1();
    RField r(np.spec);
    // frozen from the erf closed form at x=5, t=0.01
    CHECK(r.value(5.0, 0.01) == Catch::Approx(2.471790520822612).epsilon(1e-10));
    // and across a profile
    for (double x : {0.5, 2.0, 4.0, 5.0, 6.5, 9.5}) {
        CHECK(r.value(x, 0.01) == Catch::Approx(np.exact_r(x, 0.01)).margin(1e-11));
    }
}

TEST_CASE("r field vanishes for zero data") {
    auto np = gallery::zero_problem();
    RField r(np.spec);
    CHECK(r.value(0.5, 0.3) == 0.0);
    CHECK(r.at_end(Side::lower, 0.1) == 0.0);
    CHECK(r.end_time_derivative(Side::upper, 0.1) == 0.0);
    CHECK(r.end_initial(Side::lower) == 0.0);
}

TEST_CASE("r field recovers the initial condition as t -> 0+") {
    auto np = gallery::example_6_1();
    RField r(np.spec);
    CHECK(std::abs(r.value(2.0, 1e-8) - 1.0) < 1e-6);
    // at the kink the approach is ~ sqrt(t) and must decrease monotonically
    const double e4 = std::abs(r.value(5.0, 1e-4) - 2.5);
    const double e6 = std::abs(r.value(5.0, 1e-6) - 2.5);
    const double e8 = std::abs(r.value(5.0, 1e-8) - 2.5);
    CHECK(e4 > e6);
    CHECK(e6 > e8);
}

TEST_CASE("endpoint initial limits are half the one-sided phi values") {
    auto np = gallery::example_6_1();
    RField r(np.spec);
    CHECK(r.end_initial(Side::lower) == 0.0);
    CHECK(r.end_initial(Side::upper) == 0.0);

    auto spec = np.spec;
    spec.phi = SpaceFunction::constant(3.0);
    RField rc(spec);
    CHECK(rc.end_initial(Side::lower) == 1.5);
    CHECK(rc.end_initial(Side::upper) == 1.5);
    // brute-force limit of the integral itself
    CHECK(rc.at_end(Side::lower, 1e-10) == Catch::Approx(1.5).epsilon(1e-11));
    CHECK(rc.at_end(Side::upper, 1e-10) == Catch::Approx(1.5).epsilon(1e-11));
}

TEST_CASE("endpoint values agree with the interior evaluator") {
    auto np = gallery::example_6_1();
    RField r(np.spec);
    for (double t : {1e-4, 1e-3, 1e-2}) {
        CHECK(r.at_end(Side::lower, t) == Catch::Approx(r.value(0.0, t)).margin(1e-13));
        CHECK(r.at_end(Side::upper, t) == Catch::Approx(r.value(10.0, t)).margin(1e-13));
    }
}

TEST_CASE("endpoint time derivative matches a centered difference of r") {
    auto np = gallery::example_6_1();
    RField r(np.spec);
    for (double t : {1e-3, 1e-2, 1e-1}) {
        const double h = 1e-4 * t;
        const double fd = (r.at_end(Side::lower, t + h) - r.at_end(Side::lower, t - h)) /
                          (2.0 * h);
        const double an = r.end_time_derivative(Side::lower, t);
        CHECK(an == Catch::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("endpoint time derivative with a source term") {
    // phi = 1, f = 2 constant, b = 0.5 on [0, 4]
    ProblemSpec spec;
    spec.a = 0.8;
    spec.b = 0.5;
    spec.l1 = 0.0;
    spec.l2 = 4.0;
    spec.T = 1.0;
    spec.phi = SpaceFunction::constant(1.0);
    spec.f = SourceFunction::constant(2.0);
    spec.bc1 = BoundaryCondition::dirichlet(TimeFunction::zero());
    spec.bc2 = BoundaryCondition::dirichlet(TimeFunction::zero());
    RField r(spec);
    for (double t : {5e-3, 5e-2}) {
        const double h = 1e-5 * t;
        const double fd =
            (r.at_end(Side::upper, t + h) - r.at_end(Side::upper, t - h)) / (2.0 * h);
        const double an = r.end_time_derivative(Side::upper, t);
        CHECK(an == Catch::Approx(fd).epsilon(1e-5));
    }
    // half-limit structure: r(end, t) -> phi/2 while the source fills in at rate f/2 - ...
    CHECK(r.end_time_derivative(Side::lower, 1e-6) ==
          Catch::Approx(2.0 / 2.0 - 0.5 / 2.0).margin(2e-2));
}

TEST_CASE("spatial derivative of r matches a centered difference") {
    auto np = gallery::example_6_1();
    RField r(np.spec);
    for (double x : {2.0, 4.8, 7.0}) {
        const double h = 1e-5;
        const double fd = (r.value(x + h, 0.01) - r.value(x - h, 0.01)) / (2.0 * h);
        CHECK(r.space_derivative(x, 0.01) == Catch::Approx(fd).margin(1e-8));
    }
}

TEST_CASE("endpoint derivative of a constant profile follows the reaction decay") {
    // phi == 1, f = 0: r(end, t) = e^{-bt}/2 up to exponentially small terms,
    // so dr/dt(end, t) -> -b/2 as t -> 0+.
    ProblemSpec spec;
    spec.a = 1.0;
    spec.b = 0.8;
    spec.l1 = 0.0;
    spec.l2 = 6.0;
    spec.T = 1.0;
    spec.phi = SpaceFunction::constant(1.0);
    spec.f = SourceFunction::zero();
    spec.bc1 = BoundaryCondition::dirichlet(TimeFunction::zero());
    spec.bc2 = BoundaryCondition::dirichlet(TimeFunction::zero());
    RField r(spec);
    CHECK(r.end_time_derivative(Side::lower, 1e-6) == Catch::Approx(-0.4).margin(1e-4));
}

TEST_CASE("endpoint time derivative meets the tighter tolerance at t = 0.01") {
    auto np = gallery::example_6_1();
    RField r(np.spec);
    const double t = 0.01, h = 1e-6;
    const double fd = (r.at_end(Side::lower, t + h) - r.at_end(Side::lower, t - h)) / (2.0 * h);
    CHECK(r.end_time_derivative(Side::lower, t) == Catch::Approx(fd).epsilon(1e-6));
}
