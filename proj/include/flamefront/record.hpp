#pragma once

#include <optional>
#include <string>
#include <vector>

namespace flamefront {

/// Parameters shared by the Cartesian and radial integrators.
struct SolverParams {
    double eps = 0.02;
    double cfl_safety = 0.5;
    /// Snapshot requests; each is served by the first step time >= request.
    std::vector<double> record_times;
    /// Max-value level that declares extinction. Defaults to eps / 10.
    std::optional<double> extinction_threshold;
    long max_steps = 50'000'000;
    /// Series sample every this many steps (plus the first and last step).
    int series_stride = 1;
    /// Explicit time step. Must not exceed the stability bound.
    std::optional<double> dt;

    double threshold() const { return extinction_threshold.value_or(eps / 10.0); }
};

struct SeriesSample {
    double t = 0.0;
    double max_u = 0.0;
    double mass = 0.0;

    bool operator==(const SeriesSample&) const = default;
};

enum class ExtinctionMethod { ThresholdCrossing, SquareLawFit };

inline std::string extinction_method_name(ExtinctionMethod m) {
    return m == ExtinctionMethod::SquareLawFit ? "square_law_fit" : "threshold_crossing";
}

struct ExtinctionEstimate {
    double T_hat = 0.0;
    ExtinctionMethod method = ExtinctionMethod::ThresholdCrossing;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    /// RMS residual of the (max u)^2 line relative to the fitted data range.
    double fit_residual = 0.0;
    int fit_samples = 0;
    /// Root of the fitted line before T_hat is held at the last time with
    /// max u above the threshold.
    double fit_root = 0.0;

    bool operator==(const ExtinctionEstimate&) const = default;
};

/// Time history of one integration. Field is ScalarField or RadialField.
template <class Field>
struct BasicRunRecord {
    std::vector<Field> snapshots;
    std::vector<SeriesSample> series;
    std::optional<ExtinctionEstimate> extinction;
    long steps_taken = 0;
    bool extinct = false;
    double dt = 0.0;
    double threshold = 0.0;
    /// Largest step-to-step increase of max u; 0 when the discrete maximum
    /// principle held at every step.
    double max_increase = 0.0;
    /// Smallest value seen in any cell at any step.
    double min_value = 0.0;

    std::optional<double> extinction_time_estimate() const {
        if (!extinction) return std::nullopt;
        return extinction->T_hat;
    }

    bool operator==(const BasicRunRecord&) const = default;
};

}  // namespace flamefront
