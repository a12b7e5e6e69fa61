#pragma once

#include <functional>

#include "flamefront/fields.hpp"
#include "flamefront/reaction.hpp"
#include "flamefront/record.hpp"

namespace flamefront {

using RunRecord = BasicRunRecord<ScalarField>;

/// Called at every series sample with the current field.
using FieldObserver = std::function<void(const ScalarField&, const SeriesSample&)>;

/// Largest stable explicit step: cfl_safety * min(h^2 / (2 d), eps^2 / sup|beta'|).
double stable_time_step(double spacing, int dimension, double eps, double cfl_safety, const BetaKernel& kernel);

/// Resolves the step for a Cartesian run, throwing ConfigError when the
/// parameters are inconsistent or an explicit dt exceeds the stability bound.
double cartesian_time_step(const GridSpec& grid, const SolverParams& params, const BetaKernel& kernel);

/// One explicit Euler step of u_t = Lap u - (1/eps) beta(u/eps) with the sink
/// limited to u/dt. The result is nonnegative with a zero boundary ring.
ScalarField step(const ScalarField& field, const SolverParams& params, const BetaKernel& kernel);

/// Same update with a given dt, writing into out (same grid as in).
void step_into(const ScalarField& in, ScalarField& out, double dt, double eps, const BetaKernel& kernel);

/// Integrates until max u drops below the extinction threshold or max_steps
/// is reached. A run that hits max_steps comes back with extinct == false.
RunRecord run(const ScalarField& initial, const SolverParams& params, const BetaKernel& kernel,
              const FieldObserver& observer = {});

struct OrderedPairResult {
    RunRecord low;
    RunRecord high;
    /// max over steps and cells of (u_low - u_high)_+.
    double ordering_violation = 0.0;
};

/// Runs two ordered initial states on one shared step schedule.
OrderedPairResult run_pair_ordered(const ScalarField& initial_low, const ScalarField& initial_high,
                                   const SolverParams& params, const BetaKernel& kernel);

}  // namespace flamefront
