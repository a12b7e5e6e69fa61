#include "flamefront/solver.hpp"

#include <algorithm>
#include <cmath>

#include "flamefront/detail/run_loop.hpp"
#include "flamefront/error.hpp"

namespace flamefront {

double stable_time_step(double spacing, int dimension, double eps, double cfl_safety, const BetaKernel& kernel) {
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!(spacing > 0.0)) throw ConfigError("spacing must be positive");
    const double diffusion = spacing * spacing / (2.0 * dimension);
    const double reaction = eps * eps / kernel.derivative_bound();
    return cfl_safety * std::min(diffusion, reaction);
}

double cartesian_time_step(const GridSpec& grid, const SolverParams& params, const BetaKernel& kernel) {
    const double bound = stable_time_step(grid.spacing(), 2, params.eps, params.cfl_safety, kernel);
    if (params.dt) {
        if (!(*params.dt > 0.0)) throw ConfigError("dt must be positive");
        if (*params.dt > bound) throw ConfigError("dt exceeds the explicit stability bound");
        return *params.dt;
    }
    return bound;
}

void step_into(const ScalarField& in, ScalarField& out, double dt, double eps, const BetaKernel& kernel) {
    const int n = in.nodes();
    const double h = in.grid().spacing();
    const double inv_h2 = 1.0 / (h * h);
    const std::span<const double> u = in.values();
    const std::span<double> v = out.values();
    const std::size_t stride = static_cast<std::size_t>(n);
    for (int i = 0; i < n; ++i) {
        v[i] = 0.0;
        v[static_cast<std::size_t>(n - 1) * stride + i] = 0.0;
    }
    for (int j = 1; j + 1 < n; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * stride;
        v[row] = 0.0;
        v[row + stride - 1] = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            const std::size_t k = row + static_cast<std::size_t>(i);
            const double c = u[k];
            const double w = u[k - 1], e = u[k + 1], s = u[k - stride], nn = u[k + stride];
            const double lap = ((w + e + s + nn) - 4.0 * c) * inv_h2;
            const double sink = (c > 0.0 && c < eps) ? std::min(kernel.reaction_sink(c, eps), c / dt) : 0.0;
            const double next = c + dt * (lap - sink);
            // Under the CFL bound the update is a subconvex combination of the
            // stencil values; the clamp only removes rounding excursions.
            const double local_max = std::max({c, w, e, s, nn});
            v[k] = std::clamp(next, 0.0, local_max);
        }
    }
}

ScalarField step(const ScalarField& field, const SolverParams& params, const BetaKernel& kernel) {
    const double dt = cartesian_time_step(field.grid(), params, kernel);
    ScalarField out(field.grid(), field.time() + dt);
    step_into(field, out, dt, params.eps, kernel);
    return out;
}

namespace {

void require_valid(const ScalarField& f, const char* what) {
    if (!f.satisfies_invariants()) {
        throw PreconditionError(std::string(what) + " must be nonnegative with a zero boundary ring");
    }
}

}  // namespace

RunRecord run(const ScalarField& initial, const SolverParams& params, const BetaKernel& kernel,
              const FieldObserver& observer) {
    require_valid(initial, "initial field");
    const double dt = cartesian_time_step(initial.grid(), params, kernel);
    return detail::run_loop(
        initial, params, dt,
        [&](const ScalarField& in, ScalarField& out, double step_dt) { step_into(in, out, step_dt, params.eps, kernel); },
        [&](const ScalarField& f, const SeriesSample& s) {
            if (observer) observer(f, s);
        });
}

OrderedPairResult run_pair_ordered(const ScalarField& initial_low, const ScalarField& initial_high,
                                   const SolverParams& params, const BetaKernel& kernel) {
    require_valid(initial_low, "initial_low");
    require_valid(initial_high, "initial_high");
    if (!(initial_low.grid() == initial_high.grid())) throw PreconditionError("ordered pair grids differ");
    const auto lo = initial_low.values();
    const auto hi = initial_high.values();
    for (std::size_t k = 0; k < lo.size(); ++k) {
        if (lo[k] > hi[k]) throw PreconditionError("initial_low must not exceed initial_high");
    }

    const double dt = cartesian_time_step(initial_low.grid(), params, kernel);
    auto ignore = [](const ScalarField&, const SeriesSample&) {};
    detail::Recorder<ScalarField> rec_low(params, dt), rec_high(params, dt);
    ScalarField a = initial_low, b = initial_high;
    ScalarField sa = a, sb = b;
    rec_low.begin(a, ignore);
    rec_high.begin(b, ignore);
    OrderedPairResult result;
    long steps = 0;
    // One shared schedule until both runs finish.
    while (!rec_high.done() || !rec_low.done()) {
        if (steps >= params.max_steps) break;
        step_into(a, sa, dt, params.eps, kernel);
        step_into(b, sb, dt, params.eps, kernel);
        std::swap(a, sa);
        std::swap(b, sb);
        ++steps;
        const double t = initial_low.time() + static_cast<double>(steps) * dt;
        a.set_time(t);
        b.set_time(t);
        if (!rec_low.done()) rec_low.after_step(a, ignore);
        if (!rec_high.done()) rec_high.after_step(b, ignore);
        const auto va = a.values();
        const auto vb = b.values();
        for (std::size_t k = 0; k < va.size(); ++k) {
            result.ordering_violation = std::max(result.ordering_violation, va[k] - vb[k]);
        }
    }
    rec_low.finish();
    rec_high.finish();
    result.low = std::move(rec_low).take();
    result.high = std::move(rec_high).take();
    return result;
}

}  // namespace flamefront
