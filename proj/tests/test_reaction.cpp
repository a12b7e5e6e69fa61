#include <doctest.h>

#include <cmath>

#include "flamefront/error.hpp"
#include "flamefront/reaction.hpp"

using namespace flamefront;

TEST_CASE("beta vanishes outside (0, 1)") {
    const BetaKernel k;
    CHECK(k.beta(1.5) == 0.0);
    CHECK(k.beta(-0.1) == 0.0);
    CHECK(k.beta(0.0) == 0.0);
    CHECK(k.beta(1.0) == 0.0);
    CHECK(k.beta(0.5) > 0.0);
}

TEST_CASE("beta has mass one half") {
    for (KernelShape shape : {KernelShape::SmoothBump, KernelShape::PolyBump}) {
        const BetaKernel k(shape);
        CHECK(std::abs(k.mass() - 0.5) <= 1e-10);
        const double m = adaptive_simpson([&](double s) { return k(s); }, 0.0, 1.0, 1e-13);
        CHECK(std::abs(m - 0.5) <= 1e-10);
    }
}

TEST_CASE("smooth bump is symmetric and matches its closed form") {
    const BetaKernel k;
    const double c = k.normalization();
    for (int i = 1; i < 200; ++i) {
        const double s = i / 200.0;
        CHECK(std::abs(k.beta(s) - k.beta(1.0 - s)) <= 1e-14);
        CHECK(k.beta(s) == doctest::Approx(c * std::exp(-1.0 / (s * (1.0 - s)))).epsilon(1e-14));
    }
    // c from an independent midpoint sum
    double raw = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double s = (i + 0.5) / n;
        raw += std::exp(-1.0 / (s * (1.0 - s))) / n;
    }
    CHECK(c == doctest::Approx(0.5 / raw).epsilon(1e-9));
}

TEST_CASE("reaction sink") {
    const BetaKernel k;
    const double eps = 0.02;
    CHECK(k.reaction_sink(2 * eps, eps) == 0.0);
    CHECK(k.reaction_sink(0.0, eps) == 0.0);
    const double expected = k.normalization() * std::exp(-4.0) / eps;
    CHECK(k.reaction_sink(eps / 2, eps) == doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS(k.reaction_sink(0.01, 0.0), ParameterError);
    CHECK_THROWS_AS(k.reaction_sink(0.01, -1.0), ParameterError);
    for (int i = 0; i <= 300; ++i) {
        const double u = i * 1e-4;
        for (double e : {0.01, 0.02, 0.04}) {
            const double v = k.reaction_sink(u, e);
            CHECK(v >= 0.0);
            if (u >= e) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("derivative bound") {
    const BetaKernel k;
    const double b = k.derivative_bound();
    CHECK(b > 0.0);
    CHECK(b >= std::abs(k.derivative(0.9)));
    for (int i = 1; i < 1000; ++i) CHECK(b >= std::abs(k.derivative(i / 1000.0)) * (1 - 1e-12));
    const BetaKernel fine(KernelShape::SmoothBump, 8192);
    CHECK(std::abs(fine.derivative_bound() - b) <= 1e-6 * b);

    // derivative agrees with a centred difference of beta
    for (double s : {0.2, 0.35, 0.5, 0.77}) {
        const double d = 1e-6;
        CHECK(k.derivative(s) == doctest::Approx((k.beta(s + d) - k.beta(s - d)) / (2 * d)).epsilon(1e-6));
    }
    CHECK(std::abs(k.derivative(0.5)) <= 1e-12);
}

TEST_CASE("kernel names") {
    CHECK(kernel_shape_from_name("smooth_bump") == KernelShape::SmoothBump);
    CHECK(kernel_shape_from_name("poly_bump") == KernelShape::PolyBump);
    CHECK(kernel_shape_name(KernelShape::PolyBump) == "poly_bump");
    CHECK_THROWS_AS(kernel_shape_from_name("gauss"), ConfigError);
}
