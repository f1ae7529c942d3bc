#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "rdst/finite_difference.hpp"
#include "rdst/gallery.hpp"
#include "rdst/series.hpp"
#include "rdst/short_time.hpp"

using namespace rdst;

TEST_CASE("series coefficients of the triangular profile") {
    auto np = gallery::example_6_1();
    SeriesSolution s(np.spec, 20);
    REQUIRE(s.terms() == 20);
    // even modes vanish; retained modes are 1, 3, ..., 39
    CHECK(s.modes().front() == 1);
    CHECK(s.modes().back() == 39);
    // c_1 = 20/pi^2, c_3 = -20/(9 pi^2)
    const double c1 = 20.0 / (std::numbers::pi * std::numbers::pi);
    CHECK(s.coefficients()[0] == Catch::Approx(c1).epsilon(1e-12));
    CHECK(s.coefficients()[1] == Catch::Approx(-c1 / 9.0).epsilon(1e-12));
}

TEST_CASE("series partial sum approaches phi at t = 0") {
    auto np = gallery::example_6_1();
    SeriesSolution s(np.spec, 20);
    // tail at the peak (phi(5) = u0/2): 20/pi^2 * sum_{k>20} (2k-1)^{-2},
    // summed exactly via sum_{k>=1} (2k-1)^{-2} = pi^2/8
    double head = 0.0;
    for (int k = 1; k <= 20; ++k) head += 1.0 / ((2.0 * k - 1.0) * (2.0 * k - 1.0));
    const double tail = 20.0 / (std::numbers::pi * std::numbers::pi) *
                        (std::numbers::pi * std::numbers::pi / 8.0 - head);
    CHECK(std::abs(s(5.0, 0.0) - 2.5) <= tail * 1.0001);
    CHECK(std::abs(s(5.0, 0.0) - 2.5) >= tail * 0.9999); // all tail terms are positive here
    // convergence in K at an interior point
    const double e10 = std::abs(SeriesSolution(np.spec, 10)(4.0, 0.0) - 2.0);
    const double e40 = std::abs(SeriesSolution(np.spec, 40)(4.0, 0.0) - 2.0);
    CHECK(e40 < e10);
}

TEST_CASE("series matches the closed-form reference of the worked example") {
    auto np = gallery::example_6_1();
    SeriesSolution s(np.spec, 20);
    for (double x : {1.0, 2.0, 5.0, 7.5}) {
        CHECK(s(x, 0.01) == Catch::Approx(np.series_k(x, 0.01, 20)).margin(1e-12));
        CHECK(s(x, 0.5) == Catch::Approx(np.series_k(x, 0.5, 20)).margin(1e-12));
    }
}

TEST_CASE("single eigenmode is exact at K = 1") {
    auto np = gallery::dirichlet_eigenmode(2.0, 0.7, 0.4);
    SeriesSolution s(np.spec, 1);
    REQUIRE(s.terms() == 1);
    for (double t : {0.0, 0.1, 0.7}) {
        for (double x : {0.3, 1.0, 1.7}) {
            CHECK(s(x, t) == Catch::Approx(np.exact_u(x, t)).margin(1e-12));
        }
    }
}

TEST_CASE("series rejects unsupported problems") {
    auto spec = gallery::example_6_1().spec;
    spec.bc1 = BoundaryCondition::neumann(TimeFunction::zero());
    CHECK_THROWS_AS(SeriesSolution(spec, 5), spec_error);

    auto spec2 = gallery::example_6_1().spec;
    spec2.f = SourceFunction::constant(1.0);
    CHECK_THROWS_AS(SeriesSolution(spec2, 5), spec_error);

    auto spec3 = gallery::example_6_1().spec;
    spec3.bc2.g = TimeFunction::constant(1.0);
    CHECK_THROWS_AS(SeriesSolution(spec3, 5), spec_error);
}

TEST_CASE("series interior values track the short-time approximation") {
    auto np = gallery::example_6_1();
    ShortTimeSolver st(np.spec);
    SeriesSolution s(np.spec, 20);
    CHECK(std::abs(s(2.0, 0.01) - st.interior(2.0, 0.01)) < 5e-3);
}

TEST_CASE("fd solve returns the zero field for zero data") {
    auto np = gallery::zero_problem();
    const double ts[] = {0.05, 0.1};
    auto f = fd_solve(np.spec, 0.02, 1e-3, ts);
    for (std::size_t it = 0; it < f.ts().size(); ++it)
        for (std::size_t ix = 0; ix < f.xs().size(); ++ix) CHECK(f.u(ix, it) == 0.0);
}

TEST_CASE("fd convergence is second order on the eigenmode problem") {
    auto np = gallery::dirichlet_eigenmode();
    const double T = 0.1;
    const double ts[] = {T};
    auto err = [&](double dx, double dt) {
        auto f = fd_solve(np.spec, dx, dt, ts);
        double m = 0.0;
        for (std::size_t i = 0; i < f.xs().size(); ++i)
            m = std::max(m, std::abs(f.u(i, 0) - np.exact_u(f.xs()[i], T)));
        return m;
    };
    const double e1 = err(0.02, 2e-3);
    const double e2 = err(0.01, 1e-3);
    CHECK(e1 / e2 == Catch::Approx(4.0).margin(0.8));
}

TEST_CASE("fd robin closure is second order on a neumann eigenmode") {
    // phi = cos(pi x / L) with zero-flux ends decays as one mode
    ProblemSpec spec;
    spec.a = 0.8;
    spec.b = 0.2;
    spec.l1 = 0.0;
    spec.l2 = 2.0;
    spec.T = 1.0;
    spec.phi = SpaceFunction::custom(
        [](double x) { return std::cos(std::numbers::pi * x / 2.0); });
    spec.f = SourceFunction::zero();
    spec.bc1 = BoundaryCondition::neumann(TimeFunction::zero());
    spec.bc2 = BoundaryCondition::neumann(TimeFunction::zero());
    const double rate = 0.64 * std::numbers::pi * std::numbers::pi / 4.0 + 0.2;
    const double T = 0.25;
    const double ts[] = {T};
    auto err = [&](double dx, double dt) {
        auto f = fd_solve(spec, dx, dt, ts);
        double m = 0.0;
        for (std::size_t i = 0; i < f.xs().size(); ++i)
            m = std::max(m, std::abs(f.u(i, 0) - std::exp(-rate * T) *
                                                     std::cos(std::numbers::pi *
                                                              f.xs()[i] / 2.0)));
        return m;
    };
    const double e1 = err(0.02, 2e-3);
    const double e2 = err(0.01, 1e-3);
    CHECK(e1 / e2 == Catch::Approx(4.0).margin(0.8));
}

TEST_CASE("fd with dirichlet data follows the boundary functions") {
    ProblemSpec spec = gallery::zero_problem().spec;
    spec.bc1.g = TimeFunction::polynomial({0.0, 1.0}); // u(0,t) = t
    const double ts[] = {0.2};
    auto f = fd_solve(spec, 0.01, 1e-3, ts);
    CHECK(f.u(0, 0) == Catch::Approx(0.2).margin(1e-12));
}

TEST_CASE("fd tracks the short-time interior approximation of the worked example") {
    auto np = gallery::example_6_1();
    ShortTimeSolver st(np.spec);
    const double ts[] = {0.01};
    auto f = fd_solve(np.spec, 0.01, 1e-4, ts);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.xs().size(); ++i) {
        const double x = f.xs()[i];
        if (x < 1.0 || x > 9.0) continue;
        worst = std::max(worst, std::abs(f.u(i, 0) - st.interior(x, 0.01)));
    }
    CHECK(worst < 5e-4); // coarser grid than the acceptance run, looser bound
}

TEST_CASE("compare_fields metrics and error paths") {
    SolutionField a({0.0, 1.0, 2.0}, {0.5}, Provenance::series);
    SolutionField b({0.0, 1.0, 2.0}, {0.5}, Provenance::fd);
    a.u(0, 0) = 1.0;
    a.u(1, 0) = 2.0;
    a.u(2, 0) = 3.0;
    b.u(0, 0) = 1.0;
    b.u(1, 0) = 2.5;
    b.u(2, 0) = 3.1;
    auto m = compare_fields(a, b);
    CHECK(m.max_abs == Catch::Approx(0.5));
    CHECK(m.x_at_max == 1.0);
    CHECK(m.count == 3);
    auto inner = compare_fields(a, b, 1.5, 2.5);
    CHECK(inner.max_abs == Catch::Approx(0.1));

    auto identical = compare_fields(a, a);
    CHECK(identical.max_abs == 0.0);
    CHECK(identical.l2 == 0.0);

    SolutionField c({0.0, 1.0}, {0.5}, Provenance::fd);
    CHECK_THROWS_AS(compare_fields(a, c), std::invalid_argument);
}

TEST_CASE("csv round-trips a field to the printed precision") {
    SolutionField a({0.0, 0.1, 0.2}, {0.01, 0.02}, Provenance::short_time, true);
    for (std::size_t it = 0; it < 2; ++it)
        for (std::size_t ix = 0; ix < 3; ++ix) {
            a.u(ix, it) = std::sin(static_cast<double>(ix + 7 * it)) / 3.0;
            a.ux(ix, it) = std::cos(static_cast<double>(ix + 7 * it)) / 7.0;
        }
    const std::string csv = a.to_csv();
    CHECK(csv.substr(0, 10) == "x,t,u,ux\n0");
    std::istringstream in(csv);
    auto b = SolutionField::from_csv(in);
    REQUIRE(b.xs() == a.xs());
    REQUIRE(b.ts() == a.ts());
    for (std::size_t it = 0; it < 2; ++it)
        for (std::size_t ix = 0; ix < 3; ++ix) {
            CHECK(b.u(ix, it) == a.u(ix, it));   // %.17g is lossless for doubles
            CHECK(b.ux(ix, it) == a.ux(ix, it));
        }
}
