#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "flamefront/analysis.hpp"
#include "flamefront/error.hpp"
#include "flamefront/initdata.hpp"
#include "flamefront/solver.hpp"

using namespace flamefront;

namespace {

ScalarField cap(const GridSpec& g, double A) {
    return ScalarField::from_function(g, [A](double x, double y) { return A * std::max(0.0, 1.0 - x * x - y * y); });
}

SolverParams params(double eps) {
    SolverParams p;
    p.eps = eps;
    p.cfl_safety = 0.9;
    return p;
}

}  // namespace

TEST_CASE("stable time step") {
    const BetaKernel k;
    const double h = 1.0 / 64;
    const double dt = stable_time_step(h, 2, 0.02, 0.5, k);
    CHECK(dt == doctest::Approx(0.5 * std::min(h * h / 4, 0.02 * 0.02 / k.derivative_bound())));
    CHECK_THROWS_AS(stable_time_step(h, 2, 0.0, 0.5, k), ConfigError);
    CHECK_THROWS_AS(stable_time_step(h, 2, 0.02, 1.5, k), ConfigError);

    SolverParams p = params(0.02);
    const GridSpec g(1.1, 64);
    p.dt = 2.0 * stable_time_step(g.spacing(), 2, 0.02, 1.0, k);
    CHECK_THROWS_AS(step(ScalarField(g), p, k), ConfigError);
    CHECK_THROWS_AS(run(ScalarField(g), p, k), ConfigError);
}

TEST_CASE("zero field is a fixed point") {
    const BetaKernel k;
    const GridSpec g(1.1, 32);
    const ScalarField z(g);
    const ScalarField next = step(z, params(0.02), k);
    for (double v : next.values()) CHECK(v == 0.0);
    const RunRecord r = run(z, params(0.02), k);
    CHECK(r.extinct);
    REQUIRE(r.extinction_time_estimate());
    CHECK(*r.extinction_time_estimate() == 0.0);
}

TEST_CASE("plateau above eps only diffuses at its edge") {
    const BetaKernel k;
    const double eps = 0.02;
    const GridSpec g(1.1, 64);
    const ScalarField f =
        ScalarField::from_function(g, [&](double x, double y) { return std::hypot(x, y) < 0.8 ? 2 * eps : 0.0; });
    const ScalarField next = step(f, params(eps), k);
    const double h = g.spacing();
    for (int j = 1; j < 64; ++j)
        for (int i = 1; i < 64; ++i) {
            const double r = std::hypot(g.coordinate(i), g.coordinate(j));
            if (r < 0.8 - 2 * h) CHECK(next.at(i, j) == f.at(i, j));
            CHECK(next.at(i, j) <= 2 * eps);
        }
}

TEST_CASE("one step matches a straight-loop reference") {
    const BetaKernel k;
    const double eps = 0.05;
    const GridSpec g(1.1, 64);
    const ScalarField f = ScalarField::from_function(g, [](double x, double y) { return 0.3 * std::exp(-6 * (x * x + y * y)); });
    const SolverParams p = params(eps);
    const double dt = cartesian_time_step(g, p, k);
    const ScalarField next = step(f, p, k);
    CHECK(next.time() == doctest::Approx(dt));
    const double h = g.spacing();
    const double c = k.normalization();
    for (int j = 1; j < 64; ++j)
        for (int i = 1; i < 64; ++i) {
            const double u = f.at(i, j);
            const double lap = (f.at(i - 1, j) + f.at(i + 1, j) + f.at(i, j - 1) + f.at(i, j + 1) - 4 * u) / (h * h);
            const double s = u / eps;
            const double beta = (s > 0 && s < 1) ? c * std::exp(-1 / (s * (1 - s))) : 0.0;
            const double sink = std::min(beta / eps, u / dt);
            const double ref = std::max(0.0, u + dt * (lap - sink));
            CHECK(std::abs(next.at(i, j) - ref) <= 1e-14);
        }
    for (int i = 0; i <= 64; ++i) {
        CHECK(next.at(i, 0) == 0.0);
        CHECK(next.at(64, i) == 0.0);
    }
}

TEST_CASE("cap run: maximum principle, nonnegativity, extinction, determinism") {
    const BetaKernel k;
    const GridSpec g(1.1, 128);
    const ScalarField u0 = cap(g, 0.5);
    SolverParams p = params(0.02);
    p.record_times = {0.02, 0.05, 0.1};
    const RunRecord r = run(u0, p, k);
    CHECK(r.extinct);
    CHECK(r.max_increase == 0.0);
    CHECK(r.min_value >= 0.0);
    REQUIRE(r.snapshots.size() == 3);
    for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
        CHECK(r.snapshots[i].time() >= p.record_times[i]);
        CHECK(r.snapshots[i].time() < p.record_times[i] + r.dt * 1.0000001);
        CHECK(r.snapshots[i].satisfies_invariants());
    }
    for (std::size_t i = 1; i < r.series.size(); ++i) CHECK(r.series[i].max_u <= r.series[i - 1].max_u);
    REQUIRE(r.extinction_time_estimate());
    const double T = *r.extinction_time_estimate();
    CHECK(std::isfinite(T));
    CHECK(T > 0.1);
    CHECK(T < 0.3);
    CHECK(T >= r.series.back().t - r.dt * 10 - 1e-12);

    const RunRecord again = run(u0, p, k);
    CHECK(again == r);
}

TEST_CASE("support spreads at most one cell per step") {
    const BetaKernel k;
    const GridSpec g(1.1, 64);
    ScalarField f(g);
    f.at(32, 32) = 0.3;
    f.at(33, 32) = 0.2;
    SolverParams p = params(0.02);
    ScalarField cur = f;
    for (int s = 1; s <= 10; ++s) {
        cur = step(cur, p, k);
        for (int j = 0; j <= 64; ++j)
            for (int i = 0; i <= 64; ++i) {
                const int d = std::min(std::abs(i - 32) + std::abs(j - 32), std::abs(i - 33) + std::abs(j - 32));
                if (d > s) CHECK(cur.at(i, j) == 0.0);
            }
    }
}

TEST_CASE("max_steps cut-off returns a partial record") {
    const BetaKernel k;
    const GridSpec g(1.1, 64);
    SolverParams p = params(0.02);
    p.max_steps = 20;
    const RunRecord r = run(cap(g, 0.5), p, k);
    CHECK_FALSE(r.extinct);
    CHECK(r.steps_taken == 20);
    CHECK_FALSE(r.extinction_time_estimate());
    CHECK_FALSE(r.series.empty());
}

TEST_CASE("ordered pairs") {
    const BetaKernel k;
    const GridSpec g(1.1, 128);
    const SolverParams p = params(0.04);
    const ScalarField lo = cap(g, 0.4);
    ScalarField hi = lo;
    for (double& v : hi.values()) v *= 1.1;

    const auto same = run_pair_ordered(lo, lo, p, k);
    CHECK(same.ordering_violation == 0.0);
    const auto zero = run_pair_ordered(ScalarField(g), lo, p, k);
    CHECK(zero.ordering_violation == 0.0);
    const auto pair = run_pair_ordered(lo, hi, p, k);
    CHECK(pair.ordering_violation <= 1e-12);
    CHECK(pair.low.extinct);
    CHECK(pair.high.extinct);
    CHECK(*pair.low.extinction_time_estimate() <= *pair.high.extinction_time_estimate());
    CHECK_THROWS_AS(run_pair_ordered(hi, lo, p, k), PreconditionError);
}

TEST_CASE("invalid initial field is rejected") {
    const BetaKernel k;
    const GridSpec g(1.1, 32);
    ScalarField f(g);
    f.at(5, 5) = -0.1;
    CHECK_THROWS_AS(run(f, params(0.02), k), PreconditionError);
}
