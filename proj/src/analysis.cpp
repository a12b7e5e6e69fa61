#include "flamefront/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flamefront/error.hpp"

namespace flamefront {

namespace {

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double e = y[k] - (fit.intercept + fit.slope * x[k]);
        ss += e * e;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

}  // namespace

ExtinctionEstimate estimate_extinction(std::span<const SeriesSample> series, double threshold,
                                       std::optional<double> fit_floor) {
    if (!(threshold > 0.0)) throw ParameterError("extinction threshold must be positive");
    const auto crossing = std::find_if(series.begin(), series.end(),
                                       [&](const SeriesSample& s) { return s.max_u < threshold; });
    if (crossing == series.end()) throw EstimationError("series never drops below the extinction threshold");
    const auto c = static_cast<std::size_t>(crossing - series.begin());

    ExtinctionEstimate est;
    est.method = ExtinctionMethod::ThresholdCrossing;
    double last_alive = series.front().t;
    if (c == 0) {
        est.T_hat = series.front().t;
    } else {
        const SeriesSample& a = series[c - 1];
        const SeriesSample& b = series[c];
        last_alive = a.t;
        const double w = (a.max_u - threshold) / (a.max_u - b.max_u);
        est.T_hat = a.t + w * (b.t - a.t);
    }

    const double floor = std::max(threshold, fit_floor.value_or(threshold));
    auto collect = [&](double upper) {
        std::vector<double> t, y;
        for (std::size_t k = 0; k < c; ++k) {
            const double m = series[k].max_u;
            if (m >= floor && m <= upper) {
                t.push_back(series[k].t);
                y.push_back(m * m);
            }
        }
        return std::pair{t, y};
    };
    auto [t, y] = collect(10.0 * floor);
    if (t.size() < 8) std::tie(t, y) = collect(std::numeric_limits<double>::infinity());
    if (t.size() >= 8) {
        const LineFit fit = least_squares(t, y);
        const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
        const double range = *ymax - *ymin;
        const double residual = range > 0.0 ? fit.rms / range : std::numeric_limits<double>::infinity();
        if (fit.slope < 0.0 && residual <= 0.1) {
            est.method = ExtinctionMethod::SquareLawFit;
            est.fit_root = -fit.intercept / fit.slope;
            est.T_hat = std::max(est.fit_root, last_alive);
            est.fit_lo = t.front();
            est.fit_hi = t.back();
            est.fit_residual = residual;
            est.fit_samples = static_cast<int>(t.size());
        } else {
            est.fit_residual = residual;
        }
    }
    return est;
}

DyadicSchedule dyadic_times(double T, int k_max) {
    if (!(T > 0.0)) throw ParameterError("dyadic schedule needs T > 0");
    if (k_max < 1 || k_max > 52) throw ParameterError("dyadic schedule needs 1 <= k_max <= 52");
    DyadicSchedule s;
    s.T = T;
    for (int i = 1; i <= k_max; ++i) s.times.push_back((1.0 - std::ldexp(1.0, -i)) * T);
    return s;
}

SqrtLawRatio sqrt_law_ratio(std::span<const SeriesSample> series, double T_hat, double frac_lo, double frac_hi) {
    if (!(frac_lo > 0.0 && frac_hi < 1.0 && frac_lo < frac_hi)) {
        throw ParameterError("sqrt-law window fractions must satisfy 0 < lo < hi < 1");
    }
    if (!(T_hat > 0.0)) throw ParameterError("sqrt-law ratio needs T_hat > 0");
    SqrtLawRatio out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = 0.0;
    int in_window = 0;
    for (const SeriesSample& s : series) {
        if (s.t < frac_lo * T_hat || s.t > frac_hi * T_hat) continue;
        ++in_window;
        if (s.t >= T_hat || s.max_u <= 0.0) {
            ++out.excluded;
            continue;
        }
        const double r = s.max_u / std::sqrt(T_hat - s.t);
        out.min_ratio = std::min(out.min_ratio, r);
        out.max_ratio = std::max(out.max_ratio, r);
        ++out.used;
    }
    if (in_window == 0) throw ParameterError("sqrt-law window contains no samples");
    if (out.used == 0) out.min_ratio = 0.0;
    return out;
}

std::vector<DyadicFlatness> dyadic_flatness_levels(std::span<const BoundaryGeometry> geometry_series,
                                                   const DyadicSchedule& schedule, double spacing) {
    if (geometry_series.empty()) throw InsufficientResolutionError("no geometry samples");
    if (!(spacing > 0.0)) throw ParameterError("spacing must be positive");
    std::vector<DyadicFlatness> levels;
    for (int k = 1; k <= schedule.levels(); ++k) {
        const double tk = schedule.time(k);
        const auto nearest = std::min_element(geometry_series.begin(), geometry_series.end(),
                                              [&](const BoundaryGeometry& a, const BoundaryGeometry& b) {
                                                  return std::abs(a.time - tk) < std::abs(b.time - tk);
                                              });
        DyadicFlatness level{k, tk, *nearest, false};
        const BoundaryGeometry& g = level.geometry;
        level.resolved = !g.extinct && g.r_in >= 8.0 * spacing && g.flatness > 2.0 * spacing / g.r_in;
        levels.push_back(level);
    }
    return levels;
}

FlatnessFit flatness_decay_fit(std::span<const BoundaryGeometry> geometry_series, const DyadicSchedule& schedule,
                               double spacing, int k_min) {
    FlatnessFit fit;
    fit.levels = dyadic_flatness_levels(geometry_series, schedule, spacing);
    for (const DyadicFlatness& level : fit.levels) {
        if (level.resolved && level.k >= k_min) fit.dyadic_flatness.emplace_back(level.k, level.geometry.flatness);
    }
    fit.resolved_levels = static_cast<int>(fit.dyadic_flatness.size());
    if (fit.resolved_levels < 3) {
        throw InsufficientResolutionError("flatness decay fit needs at least 3 resolved dyadic levels, found " +
                                          std::to_string(fit.resolved_levels));
    }
    std::vector<double> x, y;
    for (const auto& [k, delta] : fit.dyadic_flatness) {
        x.push_back(k);
        y.push_back(std::log(delta));
    }
    const LineFit line = least_squares(x, y);
    fit.h_hat = std::exp(line.slope);
    fit.log_C = line.intercept;
    fit.log_fit_residual = line.rms;
    return fit;
}

InteriorRatio interior_ratio(const ScalarField& field, const RadialField& minorant, double r_in, double alpha,
                             double level, double exponent) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("interior_ratio needs alpha in (0, 1)");
    const GridSpec& grid = field.grid();
    InteriorRatio out;
    out.inner_radius = (1.0 - std::pow(alpha, exponent)) * r_in;
    if (out.inner_radius < 4.0 * grid.spacing()) {
        throw InsufficientResolutionError("interior ball spans fewer than 4 cells");
    }
    out.ratio = -std::numeric_limits<double>::infinity();
    const int n = field.nodes();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double r = std::hypot(grid.coordinate(i), grid.coordinate(j));
            if (r > out.inner_radius) continue;
            const double phi = minorant.at_radius(r);
            if (phi < level || phi <= 0.0) {
                ++out.excluded;
                continue;
            }
            out.ratio = std::max(out.ratio, field.at(i, j) / phi - 1.0);
            ++out.cells;
        }
    }
    if (out.cells == 0) out.ratio = 0.0;
    return out;
}

double self_similar_error(const ScalarField& field, double t, double T_hat, const SelfSimilarProfile& profile) {
    if (!(t < T_hat)) throw DomainError("self_similar_error needs t < T_hat");
    const double s = std::sqrt(T_hat - t);
    const GridSpec& grid = field.grid();
    const int n = field.nodes();
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double r = std::hypot(grid.coordinate(i), grid.coordinate(j));
            worst = std::max(worst, std::abs(field.at(i, j) / s - profile.value(r / s)));
        }
    }
    return worst;
}

double self_similar_error(const RadialField& field, double t, double T_hat, const SelfSimilarProfile& profile) {
    if (!(t < T_hat)) throw DomainError("self_similar_error needs t < T_hat");
    const double s = std::sqrt(T_hat - t);
    double worst = 0.0;
    for (int k = 0; k < field.nodes(); ++k) {
        worst = std::max(worst, std::abs(field[k] / s - profile.value(field.radius(k) / s)));
    }
    return worst;
}

double gradient_bound_check(const RunRecord& record, double M) {
    double worst = 0.0;
    for (const ScalarField& snap : record.snapshots) {
        const ScalarField g = gradient_magnitude(snap);
        for (double v : g.values()) worst = std::max(worst, v);
    }
    return worst / std::max(1.0, M);
}

std::vector<double> radial_gradient(const RadialField& field) {
    std::vector<double> g(static_cast<std::size_t>(field.nodes()), 0.0);
    const double h = field.spacing();
    const int last = field.cells();
    for (int k = 1; k < last; ++k) g[static_cast<std::size_t>(k)] = std::abs(field[k + 1] - field[k - 1]) / (2.0 * h);
    g[static_cast<std::size_t>(last)] = std::abs(field[last] - field[last - 1]) / h;
    return g;
}

double gradient_bound_check(const RadialRunRecord& record, double M) {
    double worst = 0.0;
    for (const RadialField& snap : record.snapshots) {
        for (double v : radial_gradient(snap)) worst = std::max(worst, v);
    }
    return worst / std::max(1.0, M);
}

}  // namespace flamefront
