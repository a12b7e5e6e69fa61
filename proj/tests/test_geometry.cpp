#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "flamefront/error.hpp"
#include "flamefront/geometry.hpp"

using namespace flamefront;

namespace {

struct Radii {
    double r_in;
    double r_out;
    bool empty;
};

// Exhaustive scan: every node in the set against every node outside it.
Radii scan(const ScalarField& f, double level) {
    const GridSpec& g = f.grid();
    double rin = std::numeric_limits<double>::infinity(), rout = -1.0;
    for (int j = 0; j < f.nodes(); ++j)
        for (int i = 0; i < f.nodes(); ++i) {
            const double x = g.coordinate(i), y = g.coordinate(j);
            const double d = std::sqrt(x * x + y * y);
            if (f.at(i, j) > level) rout = std::max(rout, d);
            else rin = std::min(rin, d);
        }
    if (rout < 0) return {0.0, 0.0, true};
    const double h2 = g.spacing() / 2;
    rout += h2;
    return {std::clamp(rin - h2, 0.0, rout), rout, false};
}

}  // namespace

TEST_CASE("smooth cap on the unit disk") {
    const GridSpec g(1.2, 128);
    const ScalarField f =
        ScalarField::from_function(g, [](double x, double y) { return std::max(0.0, 1.0 - x * x - y * y); });
    const BoundaryGeometry b = boundary_geometry(f, 1e-6);
    CHECK_FALSE(b.extinct);
    CHECK(std::abs(b.r_in - 1.0) <= 2 * g.spacing());
    CHECK(std::abs(b.r_out - 1.0) <= 2 * g.spacing());
    CHECK(b.flatness == doctest::Approx(1.0 - b.r_in / b.r_out));
}

TEST_CASE("star-shaped set") {
    const GridSpec g(1.5, 256);
    const ScalarField f = ScalarField::from_function(g, [](double x, double y) {
        const double r = std::hypot(x, y), th = std::atan2(y, x);
        return r < 1.0 + 0.1 * std::cos(6 * th) ? 1.0 : 0.0;
    });
    const BoundaryGeometry b = boundary_geometry(f, 0.5);
    const double tol = 2 * g.spacing();
    CHECK(std::abs(b.r_in - 0.9) <= tol);
    CHECK(std::abs(b.r_out - 1.1) <= tol);
    CHECK(std::abs(b.flatness - (1.0 - 0.9 / 1.1)) <= tol);
}

TEST_CASE("empty set and bad level") {
    const GridSpec g(1.0, 32);
    const ScalarField z(g);
    const BoundaryGeometry b = boundary_geometry(z, 0.1);
    CHECK(b.extinct);
    CHECK(b.flatness == 0.0);
    CHECK_THROWS_AS(boundary_geometry(z, 0.0), ParameterError);
}

TEST_CASE("random masks match the exhaustive scan exactly") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const GridSpec g(1.0, 32 + 2 * (trial % 8));
        const double p = u(rng);
        const double R = 0.2 + 0.7 * u(rng);
        const ScalarField f = ScalarField::from_function(g, [&](double x, double y) {
            return (std::hypot(x, y) < R || u(rng) < p * 0.1) ? 1.0 : 0.0;
        });
        const Radii ref = scan(f, 0.5);
        const BoundaryGeometry b = boundary_geometry(f, 0.5);
        CHECK(b.extinct == ref.empty);
        CHECK(b.r_in == ref.r_in);
        CHECK(b.r_out == ref.r_out);
    }
}

TEST_CASE("monotone in level and under nesting") {
    const GridSpec g(1.1, 64);
    const ScalarField u = ScalarField::from_function(g, [](double x, double y) {
        return std::max(0.0, 0.5 * (1 - x * x - y * y) + 0.05 * std::cos(5 * std::atan2(y, x)));
    });
    ScalarField v = u;
    for (double& x : v.values()) x *= 1.3;
    double prev_out = std::numeric_limits<double>::infinity();
    for (double level : {0.001, 0.01, 0.05, 0.1, 0.2, 0.4}) {
        const BoundaryGeometry a = boundary_geometry(u, level);
        const BoundaryGeometry b = boundary_geometry(v, level);
        CHECK(a.r_out <= prev_out);
        prev_out = a.r_out;
        CHECK(a.r_out <= b.r_out);
        CHECK(a.r_in <= b.r_in);
    }
}

TEST_CASE("radial geometry") {
    const RadialField f = RadialField::from_function(2, 2.0, 64, [](double r) { return r < 1.0 ? 1.0 - r : 0.0; });
    const BoundaryGeometry b = boundary_geometry(f, 0.01);
    CHECK(b.flatness <= 2 * f.spacing() / b.r_in);
    CHECK(std::abs(b.r_out - 1.0) <= 2 * f.spacing());
}

TEST_CASE("radial minorant") {
    const GridSpec g(1.2, 128);
    SUBCASE("radial field") {
        const ScalarField f =
            ScalarField::from_function(g, [](double x, double y) { return std::max(0.0, 1.0 - x * x - y * y); });
        const RadialField m = radial_minorant(f, 96);
        for (int k = 0; k < 96; ++k) {
            const double r = m.radius(k);
            CHECK(std::abs(m[k] - std::max(0.0, 1.0 - r * r)) <= 2 * g.spacing() * g.spacing() + 1e-12);
        }
    }
    SUBCASE("constant") {
        const ScalarField f = ScalarField::from_function(g, [](double, double) { return 0.3; });
        const RadialField m = radial_minorant(f, 64);
        for (int k = 0; m.radius(k) < 1.2 - 2 * g.spacing(); ++k) CHECK(m[k] == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("cosine modulation") {
        const ScalarField f = ScalarField::from_function(g, [](double x, double y) {
            const double r = std::hypot(x, y);
            const double c = r > 0 ? x / r : 1.0;
            return std::max(0.0, 1.0 - r * r) * (1.0 + 0.2 * c);
        });
        const RadialField m = radial_minorant(f, 96);
        for (int k = 8; k < 80; ++k) {
            const double r = m.radius(k);
            CHECK(std::abs(m[k] - 0.8 * (1 - r * r)) <= 0.01);
        }
    }
    SUBCASE("lies below the field and matches a dense-angle oracle") {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            double c[6];
            for (double& x : c) x = u(rng);
            const ScalarField f = ScalarField::from_function(g, [&](double x, double y) {
                return 2.0 + 0.3 * c[0] * std::sin(3 * x + c[1]) + 0.3 * c[2] * std::cos(2 * y + c[3]) +
                       0.2 * c[4] * std::sin(x * y * 4 + c[5]);
            });
            const RadialField m = radial_minorant(f, 64);
            for (int k = 0; k <= 48; ++k) {
                const double r = m.radius(k);
                const int dense = 4 * minorant_angle_count(r, g.spacing());
                double lo = std::numeric_limits<double>::infinity();
                for (int a = 0; a < dense; ++a) {
                    const double th = 2 * std::numbers::pi * a / dense;
                    lo = std::min(lo, sample(f, {r * std::cos(th), r * std::sin(th)}));
                }
                CHECK(m[k] >= lo - 1e-12);
                CHECK(std::abs(m[k] - lo) <= 1e-3 * lo);
            }
        }
    }
    CHECK_THROWS_AS(radial_minorant(ScalarField(g), 32), ParameterError);
    CHECK(minorant_angle_count(0.0, 0.01) == 64);
    CHECK(minorant_angle_count(1.0, 0.01) == 629);
}
