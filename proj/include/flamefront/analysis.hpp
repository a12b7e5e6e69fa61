#pragma once

#include <optional>
#include <span>
#include <vector>

#include "flamefront/fields.hpp"
#include "flamefront/geometry.hpp"
#include "flamefront/radial.hpp"
#include "flamefront/record.hpp"
#include "flamefront/selfsim.hpp"
#include "flamefront/solver.hpp"

namespace flamefront {

/// Extinction time from a max-u series.
///
/// The crossing sample is the first with max_u < threshold; its absence is an
/// EstimationError. The primary estimate fits (max u)^2 = a + b t by least
/// squares over the last decade of max u above fit_floor (samples with
/// fit_floor <= max u <= 10 fit_floor before the crossing, widened to every
/// sample >= fit_floor when fewer than 8) and reports the root -a/b. When the
/// fit has fewer than 8 samples, a nonnegative slope, or an RMS residual above
/// 10% of the fitted range, the linear threshold-crossing time is used instead.
/// fit_floor defaults to threshold.
ExtinctionEstimate estimate_extinction(std::span<const SeriesSample> series, double threshold,
                                       std::optional<double> fit_floor = std::nullopt);

template <class Field>
ExtinctionEstimate estimate_extinction(const BasicRunRecord<Field>& record, double threshold,
                                       std::optional<double> fit_floor = std::nullopt) {
    return estimate_extinction(std::span<const SeriesSample>(record.series), threshold, fit_floor);
}

/// t_i = (1 - 2^-i) T for i = 1..k_max.
struct DyadicSchedule {
    double T = 0.0;
    std::vector<double> times;

    double time(int i) const { return times.at(static_cast<std::size_t>(i - 1)); }
    int levels() const { return static_cast<int>(times.size()); }
};

DyadicSchedule dyadic_times(double T, int k_max);

struct SqrtLawRatio {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    int used = 0;
    /// Samples in the window with t >= T_hat or max_u == 0.
    int excluded = 0;
};

/// Extremes of max_u / sqrt(T_hat - t) over t in [frac_lo T_hat, frac_hi T_hat].
SqrtLawRatio sqrt_law_ratio(std::span<const SeriesSample> series, double T_hat, double frac_lo, double frac_hi);

struct DyadicFlatness {
    int k = 0;
    double t = 0.0;
    BoundaryGeometry geometry;
    /// r_in >= 8 h and flatness above the floor 2 h / r_in.
    bool resolved = false;
};

struct FlatnessFit {
    /// Every dyadic level with a matching snapshot, resolved or not.
    std::vector<DyadicFlatness> levels;
    /// (k, delta_k) pairs used by the fit.
    std::vector<std::pair<int, double>> dyadic_flatness;
    double h_hat = 0.0;
    double log_C = 0.0;
    /// RMS residual of the natural-log fit.
    double log_fit_residual = 0.0;
    int resolved_levels = 0;
};

/// Geometry nearest in time to each t_k with its resolution flag.
std::vector<DyadicFlatness> dyadic_flatness_levels(std::span<const BoundaryGeometry> geometry_series,
                                                   const DyadicSchedule& schedule, double spacing);

/// Picks the geometry nearest in time to each t_k, keeps resolved levels with
/// k >= k_min, and fits log delta_k = log C + k log h_hat. Throws
/// InsufficientResolutionError with fewer than 3 resolved levels.
FlatnessFit flatness_decay_fit(std::span<const BoundaryGeometry> geometry_series, const DyadicSchedule& schedule,
                               double spacing, int k_min = 1);

struct InteriorRatio {
    double ratio = 0.0;
    double inner_radius = 0.0;
    int cells = 0;
    /// Cells skipped because the minorant there is below the level.
    int excluded = 0;
};

/// sup over nodes with |x| <= (1 - alpha^exponent) r_in of u / phi(|x|) - 1,
/// phi the radial minorant. Throws InsufficientResolutionError when the
/// inner ball spans fewer than 4 cells.
InteriorRatio interior_ratio(const ScalarField& field, const RadialField& minorant, double r_in, double alpha,
                             double level, double exponent = 2.0 / 3.0);

/// sup over nodes of |(T_hat - t)^{-1/2} u - f(|x| / (T_hat - t)^{1/2})|.
double self_similar_error(const ScalarField& field, double t, double T_hat, const SelfSimilarProfile& profile);
double self_similar_error(const RadialField& field, double t, double T_hat, const SelfSimilarProfile& profile);

/// sup over snapshots and nodes of |grad u| / max(1, M).
double gradient_bound_check(const RunRecord& record, double M);
double gradient_bound_check(const RadialRunRecord& record, double M);

/// |du/dr| at radial nodes: central differences inside, one-sided at r_max, 0 at the origin.
std::vector<double> radial_gradient(const RadialField& field);

}  // namespace flamefront
