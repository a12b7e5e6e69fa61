#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flamefront/error.hpp"
#include "flamefront/geometry.hpp"
#include "flamefront/initdata.hpp"

using namespace flamefront;

namespace {

InitialDataSpec perturbed() {
    InitialDataSpec s;
    s.perturbation_amplitude = 0.1;
    s.angular_mode = 12;
    return s;
}

}  // namespace

TEST_CASE("unperturbed cap") {
    const InitialDataSpec spec;
    const GridSpec g(1.1, 128);
    const ScalarField u0 = build(spec, g);
    CHECK(u0.max_value() == 0.5);
    CHECK(u0.at(64, 64) == 0.5);
    CHECK(u0.satisfies_invariants());
    const BoundaryGeometry b = boundary_geometry(u0, 1e-4);
    CHECK(b.flatness <= 2 * g.spacing() / b.r_in);
    for (int j = 0; j <= 128; ++j)
        for (int i = 0; i <= 128; ++i) {
            CHECK(u0.at(i, j) == u0.at(128 - i, j));
            CHECK(u0.at(i, j) == u0.at(i, 128 - j));
            CHECK(u0.at(i, j) == u0.at(j, i));
        }
}

TEST_CASE("perturbation is nonnegative and bounded") {
    const InitialDataSpec spec = perturbed();
    const GridSpec g(1.1, 128);
    for (int j = 0; j <= 128; ++j)
        for (int i = 0; i <= 128; ++i) {
            const double r = perturbation_value(spec, g.coordinate(i), g.coordinate(j));
            CHECK(r >= 0.0);
            CHECK(r <= spec.perturbation_amplitude);
        }
    CHECK(perturbation_value(spec, 0.7, 0.0) == doctest::Approx(0.1));
    CHECK(perturbation_value(spec, 0.3, 0.0) == 0.0);
    CHECK(perturbation_value(spec, 0.95, 0.0) == 0.0);
    const double th = std::numbers::pi / 12;  // cos^2(6 th) = 0
    CHECK(perturbation_value(spec, 0.7 * std::cos(th), 0.7 * std::sin(th)) <= 1e-30);
}

TEST_CASE("envelope bump") {
    CHECK(envelope_bump(0.7, 0.5, 0.9) == doctest::Approx(1.0));
    CHECK(envelope_bump(0.5, 0.5, 0.9) == 0.0);
    CHECK(envelope_bump(0.9, 0.5, 0.9) == 0.0);
    CHECK(envelope_bump(0.6, 0.5, 0.9) == doctest::Approx(envelope_bump(0.8, 0.5, 0.9)));
    // C^2: value, slope and curvature vanish at the ends
    CHECK(envelope_bump(0.5 + 1e-4, 0.5, 0.9) <= 1e-8);
    const double d = 1e-6;
    CHECK((envelope_bump(0.5 + 2 * d, 0.5, 0.9) - 2 * envelope_bump(0.5 + d, 0.5, 0.9)) / (d * d) <= 1e-2);
}

TEST_CASE("period condition") {
    InitialDataSpec s;
    s.angular_mode = 128;
    s.perturbation_amplitude = 0.05;
    CHECK(s.angular_period() == doctest::Approx(0.0491).epsilon(1e-3));
    CHECK(s.period_condition());
    s.angular_mode = 12;
    CHECK_FALSE(s.period_condition());
}

TEST_CASE("specification errors") {
    const GridSpec g(1.1, 64);
    InitialDataSpec s;
    s.cap_amplitude = 0.6;
    CHECK_THROWS_AS(build(s, g), SpecificationError);
    s = InitialDataSpec{};
    s.M = 0.9;
    CHECK_THROWS_AS(build(s, g), SpecificationError);
    s = perturbed();
    s.envelope_hi = 1.2;
    s.M = 2.0;
    CHECK_THROWS_AS(build(s, g), SpecificationError);
    s = InitialDataSpec{};
    CHECK_THROWS_AS(build(s, GridSpec(1.0, 64)), SpecificationError);
    CHECK_THROWS_AS(build_radial(s, 2, 1.0, 64), SpecificationError);
}

TEST_CASE("validation of the pure cap") {
    const InitialDataSpec spec;
    const GridSpec g(1.1, 220);
    const ScalarField u0 = build(spec, g);
    const ValidationReport rep = validate(u0, spec);
    CHECK(rep.support.pass);
    CHECK(rep.support.measured <= 1.0);
    CHECK(rep.gradient.pass);
    CHECK(rep.peak.pass);
    CHECK(rep.peak.measured == 0.5);
    CHECK(rep.laplacian.pass);
    CHECK(rep.laplacian.measured == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(rep.boundary_gradient.pass);
    CHECK(std::abs(rep.boundary_gradient.measured - 1.0) <= 2 * g.spacing());
    CHECK(rep.shrinking_support());
    CHECK(rep.hypotheses());
    CHECK_FALSE(rep.laplacian_violation);
}

TEST_CASE("validation detects a spiky perturbation") {
    InitialDataSpec spec = perturbed();
    spec.perturbation_amplitude = 0.5;
    spec.envelope_lo = 0.5;
    spec.envelope_hi = 0.56;
    const GridSpec g(1.1, 256);
    const ValidationReport rep = validate(build(spec, g), spec);
    CHECK_FALSE(rep.laplacian.pass);
    CHECK(rep.laplacian.measured > 0.0);
    REQUIRE(rep.laplacian_violation);
    const double r = std::hypot(rep.laplacian_violation->first, rep.laplacian_violation->second);
    CHECK(r > 0.45);
    CHECK(r < 0.6);
    CHECK_FALSE(rep.shrinking_support());
}

TEST_CASE("sampled gradient converges at second order") {
    const InitialDataSpec spec = perturbed();
    // analytic gradient at (0.7, 0.1) by a tiny centred difference of the exact data
    const double x = 0.7, y = 0.1, d = 1e-6;
    auto u = [&](double a, double b) { return cap_value(spec, std::hypot(a, b)) + perturbation_value(spec, a, b); };
    const double gx = (u(x + d, y) - u(x - d, y)) / (2 * d), gy = (u(x, y + d) - u(x, y - d)) / (2 * d);
    const double exact = std::hypot(gx, gy);
    double err[3];
    int idx = 0;
    for (int cells : {110, 220, 440}) {
        const GridSpec g(1.1, cells);
        const ScalarField gm = gradient_magnitude(build(spec, g));
        const int i = g.centre_index() + static_cast<int>(std::lround(x / g.spacing()));
        const int j = g.centre_index() + static_cast<int>(std::lround(y / g.spacing()));
        err[idx++] = std::abs(gm.at(i, j) - exact);
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);
}

TEST_CASE("build is deterministic") {
    const GridSpec g(1.1, 64);
    CHECK(build(perturbed(), g) == build(perturbed(), g));
}
