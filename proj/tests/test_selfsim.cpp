#include <doctest.h>

#include <array>
#include <chrono>
#include <cmath>

#include "flamefront/error.hpp"
#include "flamefront/selfsim.hpp"

using namespace flamefront;

namespace {

// Independent high-precision values: the regular solution is the Kummer
// function M(-1/2, n/2, r^2/4), whose first zero and slope were evaluated
// with arbitrary-precision arithmetic.
struct Reference {
    int n;
    double R;
    double a1;
};

constexpr std::array<Reference, 3> kReference{{
    {1, 1.84827774600918353, 0.786802197735955759},
    {2, 2.51392668364623229, 0.981714873847528080},
    {3, 3.00395053653722300, 1.10533030174381232},
}};

double rk4_value(int n, double r_end) {
    // plain fixed-step RK4 from the series start, unscaled f(0) = 1
    const double r0 = 1e-4;
    double r = r0;
    double f = 1.0 - r0 * r0 / (4.0 * n);
    double g = -r0 / (2.0 * n);
    auto rhs = [n](double rr, double ff, double gg) { return -((n - 1) / rr - rr / 2) * gg - ff / 2; };
    const int steps = 200000;
    const double h = (r_end - r0) / steps;
    for (int i = 0; i < steps; ++i) {
        const double k1f = g, k1g = rhs(r, f, g);
        const double k2f = g + h / 2 * k1g, k2g = rhs(r + h / 2, f + h / 2 * k1f, g + h / 2 * k1g);
        const double k3f = g + h / 2 * k2g, k3g = rhs(r + h / 2, f + h / 2 * k2f, g + h / 2 * k2g);
        const double k4f = g + h * k3g, k4g = rhs(r + h, f + h * k3f, g + h * k3g);
        f += h / 6 * (k1f + 2 * k2f + 2 * k3f + k4f);
        g += h / 6 * (k1g + 2 * k2g + 2 * k3g + k4g);
        r += h;
    }
    return f;
}

}  // namespace

TEST_CASE("profile constants match high-precision references") {
    for (const Reference& ref : kReference) {
        CAPTURE(ref.n);
        const SelfSimilarProfile p = solve_profile(ref.n);
        CHECK(std::abs(p.support_radius() - ref.R) <= 1e-9);
        CHECK(std::abs(p.peak() - ref.a1) <= 1e-9);
        CHECK(p.dimension() == ref.n);
    }
}

TEST_CASE("boundary conditions and residual") {
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        const SelfSimilarProfile p = solve_profile(n);
        const double R = p.support_radius();
        CHECK(std::abs(p.value(R)) <= 1e-8);
        CHECK(std::abs(p.derivative(R) + 1.0) <= 1e-8);
        CHECK(p.residual_sup(1000) <= 1e-8);
        CHECK(p.ode_residual_sup() <= 1e-8);
        CHECK(p.monotone());
        CHECK(p.value(0.0) == p.peak());
        for (const auto& s : p.samples()) CHECK(s.df <= 0.0);
    }
}

TEST_CASE("integrators agree and the step does not matter") {
    for (int n = 1; n <= 6; ++n) {
        CAPTURE(n);
        ProfileOptions rk, dp, half;
        dp.integrator = ProfileIntegrator::DormandPrince54;
        half.max_step = 5e-4;
        const double R = solve_profile(n, 1e-12, rk).support_radius();
        CHECK(std::abs(solve_profile(n, 1e-12, dp).support_radius() - R) <= 1e-9);
        CHECK(std::abs(solve_profile(n, 1e-12, half).support_radius() - R) <= 1e-9);
    }
}

TEST_CASE("initial value does not change the rescaled profile") {
    ProfileOptions two;
    two.initial_value = 2.0;
    const SelfSimilarProfile a = solve_profile(2);
    const SelfSimilarProfile b = solve_profile(2, 1e-12, two);
    CHECK(b.support_radius() == doctest::Approx(a.support_radius()).epsilon(1e-12));
    for (double r = 0.0; r < a.support_radius(); r += 0.1) CHECK(std::abs(a.value(r) - b.value(r)) <= 1e-10);
}

TEST_CASE("eval_profile") {
    const SelfSimilarProfile p = solve_profile(2);
    const double R = p.support_radius();
    CHECK(eval_profile(p, 0.0) == p.peak());
    CHECK(eval_profile(p, 2 * R) == 0.0);
    CHECK_THROWS_AS(eval_profile(p, -1.0), DomainError);
    // re-integration to R/2, scaled by the same factor as the table
    const double scale = p.peak();
    CHECK(std::abs(eval_profile(p, R / 2) - scale * rk4_value(2, R / 2)) <= 1e-9);
}

TEST_CASE("self-similar solution") {
    const SelfSimilarProfile p = solve_profile(2);
    const std::array<double, 2> origin{0.0, 0.0};
    const std::array<double, 2> x{0.3, -0.4};
    CHECK(self_similar_U(p, x, 1.0, 1.0) == 0.0);
    CHECK(self_similar_U(p, origin, 0.0, 1.0) == doctest::Approx(p.peak()));
    CHECK_THROWS_AS(self_similar_U(p, x, 1.5, 1.0), DomainError);

    const double T = 1.0, t = 0.75;
    const double edge = p.support_radius() * std::sqrt(T - t);
    CHECK(std::abs(self_similar_U_radius(p, edge, t, T)) <= 1e-12);
    for (double d : {1e-3, 1e-4, 1e-5}) {
        const double slope = (self_similar_U_radius(p, edge - d, t, T) - self_similar_U_radius(p, edge, t, T)) / d;
        CHECK(std::abs(slope - 1.0) <= 2 * d * 5);
    }

    // scaling identity U(x, t) = sqrt(s) U(x / sqrt(s), T - (T - t) / s)
    for (double s : {0.25, 2.0, 9.0}) {
        for (double r : {0.0, 0.2, 0.7, 1.1}) {
            const double lhs = self_similar_U_radius(p, r, 0.4, 1.0);
            const double rhs = std::sqrt(s) * self_similar_U_radius(p, r / std::sqrt(s), 1.0 - 0.6 / s, 1.0);
            CHECK(std::abs(lhs - rhs) <= 1e-12);
        }
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(solve_profile(0), ParameterError);
    CHECK_THROWS_AS(solve_profile(2, 1e-3), ParameterError);
    ProfileOptions tight;
    tight.r_limit = 1.0;
    CHECK_THROWS_AS(solve_profile(2, 1e-12, tight), ProfileNotFoundError);
}

TEST_CASE("three profiles solve well under a second") {
    const auto start = std::chrono::steady_clock::now();
    for (int n = 1; n <= 3; ++n) solve_profile(n);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 1.0);
}
