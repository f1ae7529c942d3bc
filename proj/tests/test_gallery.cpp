#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "rdst/gallery.hpp"
#include "rdst/kernels.hpp"
#include "rdst/laplace.hpp"

using namespace rdst;
using cplx = std::complex<double>;

TEST_CASE("worked example carries the right data") {
    auto np = gallery::example_6_1();
    CHECK(np.spec.phi(5.0) == 2.5);
    CHECK(np.spec.phi(0.0) == 0.0);
    CHECK(np.spec.phi(10.0) == 0.0);
    CHECK(classify_case(np.spec) == CaseKind::DirichletDirichlet);
    // slope of the initial profile at the ends, from Eq.-style limits
    CHECK(np.exact_flux_lower(1e-6) == Catch::Approx(0.5).margin(1e-13));
}

TEST_CASE("every stored closed form agrees with the general machinery") {
    auto np = gallery::example_6_1();
    RField r(np.spec);
    OperationalSolution op(np.spec);
    // r closed form
    for (double x : {0.0, 1.0, 4.5, 5.0, 8.0, 10.0}) {
        CHECK(r.value(x, 0.01) == Catch::Approx(np.exact_r(x, 0.01)).margin(1e-11));
    }
    // R and U closed forms
    for (double x : {0.0, 3.0, 6.0}) {
        for (double p : {1.0, 30.0}) {
            CHECK(op.R(x, p) == Catch::Approx(np.exact_R(x, cplx(p, 0.0)).real()).epsilon(1e-11));
            CHECK(op.value(x, p) ==
                  Catch::Approx(np.exact_U(x, cplx(p, 0.0)).real()).margin(1e-12));
        }
    }
    // trace closed form
    for (double p : {1.0, 10.0, 100.0}) {
        CHECK(op.traces(p).ux_l1 ==
              Catch::Approx(np.exact_trace_ux_lower(cplx(p, 0.0)).real()).epsilon(1e-12));
    }
}

TEST_CASE("luikov problem stores the four-term closed form") {
    auto np = gallery::luikov_semi_infinite(2.0, 5.0, 3.0, 1.5, 2.0, 0.8);
    CHECK(np.spec.upper_finite() == false);
    CHECK(np.spec.bc2.is_none());
    // R closed form against the general quadrature route
    OperationalSolution op(np.spec);
    for (double x : {0.0, 0.7, 2.5}) {
        for (double p : {0.5, 4.0}) {
            CHECK(op.R(x, p) == Catch::Approx(np.exact_R(x, cplx(p, 0.0)).real()).epsilon(1e-11));
        }
    }
    // boundary trace value U(0,p) = ta/p
    CHECK(np.exact_U(0.0, cplx(3.0, 0.0)).real() == Catch::Approx(5.0 / 3.0).epsilon(1e-14));
    // degenerate parameters are rejected
    CHECK_THROWS_AS(gallery::luikov_semi_infinite(1.0, 1.0, 1.0, 0.0, 1.0, 1.0), spec_error);
}

TEST_CASE("gallery ids resolve and validate") {
    for (const auto& id : gallery::ids()) {
        auto np = gallery::by_id(id);
        CHECK(np.id == id);
        CHECK(validate(np.spec).ok());
    }
    CHECK_THROWS_AS(gallery::by_id("nope"), spec_error);
}
