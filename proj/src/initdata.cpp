#include "flamefront/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "flamefront/error.hpp"

namespace flamefront {

double InitialDataSpec::angular_period() const { return 2.0 * std::numbers::pi / angular_mode; }

bool InitialDataSpec::period_condition() const { return angular_period() <= perturbation_amplitude; }

double InitialDataSpec::support_radius() const {
    return perturbation_amplitude > 0.0 ? std::max(1.0, envelope_hi) : 1.0;
}

double envelope_bump(double r, double lo, double hi) {
    if (!(r > lo) || !(r < hi)) return 0.0;
    const double w = hi - lo;
    const double q = 4.0 * (r - lo) * (hi - r) / (w * w);
    return q * q * q;
}

double cap_value(const InitialDataSpec& spec, double radius) {
    return spec.cap_amplitude * std::max(0.0, 1.0 - radius * radius);
}

double perturbation_value(const InitialDataSpec& spec, double x, double y) {
    if (spec.perturbation_amplitude == 0.0) return 0.0;
    const double s = envelope_bump(std::hypot(x, y), spec.envelope_lo, spec.envelope_hi);
    if (s == 0.0) return 0.0;
    const double c = std::cos(0.5 * spec.angular_mode * std::atan2(y, x));
    return spec.perturbation_amplitude * s * (c * c);
}

namespace {

void check_spec(const InitialDataSpec& spec) {
    if (!(spec.cap_amplitude > 0.0 && spec.cap_amplitude <= 0.5)) {
        throw SpecificationError("cap_amplitude must lie in (0, 1/2]");
    }
    if (!(spec.perturbation_amplitude >= 0.0)) throw SpecificationError("perturbation_amplitude must be nonnegative");
    if (spec.angular_mode < 1) throw SpecificationError("angular_mode must be at least 1");
    if (!(spec.envelope_lo >= 0.0 && spec.envelope_lo < spec.envelope_hi)) {
        throw SpecificationError("perturbation envelope must satisfy 0 <= lo < hi");
    }
    if (!(spec.M > 0.0)) throw SpecificationError("M must be positive");
    if (spec.support_radius() > spec.M) throw SpecificationError("initial support escapes B_M");
}

}  // namespace

ScalarField build(const InitialDataSpec& spec, const GridSpec& grid) {
    check_spec(spec);
    if (spec.dimension != 2) throw SpecificationError("Cartesian initial data is two-dimensional");
    if (!(grid.half_width() > spec.support_radius())) {
        throw SpecificationError("grid half_width must strictly exceed the initial support radius");
    }
    return ScalarField::from_function(grid, [&](double x, double y) {
        return cap_value(spec, std::hypot(x, y)) + perturbation_value(spec, x, y);
    });
}

RadialField build_radial(const InitialDataSpec& spec, int dimension, double r_max, int cells) {
    check_spec(spec);
    if (!(r_max > 1.0)) throw SpecificationError("radial domain must strictly exceed the cap support");
    return RadialField::from_function(dimension, r_max, cells, [&](double r) { return cap_value(spec, r); });
}

ValidationReport validate(const ScalarField& field, const InitialDataSpec& spec) {
    ValidationReport rep;
    const GridSpec& grid = field.grid();
    const int n = field.nodes();
    const double h = grid.spacing();
    const ScalarField lap = laplacian(field);
    const ScalarField grad = gradient_magnitude(field);
    auto positive = [&](int i, int j) { return field.at(i, j) > 0.0; };

    double support = 0.0, grad_sup = 0.0;
    double lap_max = -std::numeric_limits<double>::infinity();
    double edge_grad = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            grad_sup = std::max(grad_sup, grad.at(i, j));
            if (!positive(i, j)) continue;
            support = std::max(support, std::hypot(grid.coordinate(i), grid.coordinate(j)));
            if (field.is_boundary(i, j)) continue;
            const bool interior = positive(i - 1, j) && positive(i + 1, j) && positive(i, j - 1) && positive(i, j + 1);
            if (interior && lap.at(i, j) > lap_max) {
                lap_max = lap.at(i, j);
                rep.laplacian_violation = std::pair{grid.coordinate(i), grid.coordinate(j)};
            }
            bool near_edge = false;
            for (int dj = -2; dj <= 2 && !near_edge; ++dj) {
                for (int di = -2; di <= 2 && !near_edge; ++di) {
                    const int a = std::clamp(i + di, 0, n - 1), b = std::clamp(j + dj, 0, n - 1);
                    near_edge = !positive(a, b);
                }
            }
            if (near_edge) edge_grad = std::max(edge_grad, grad.at(i, j));
        }
    }

    rep.support = {support, spec.M, support <= spec.M};
    rep.gradient = {grad_sup, spec.M, grad_sup <= spec.M};
    rep.peak = {spec.cap_amplitude, 1.0 / spec.M, spec.cap_amplitude >= 1.0 / spec.M};
    if (!std::isfinite(lap_max)) lap_max = 0.0;
    rep.laplacian = {lap_max, 0.0, lap_max <= 0.0};
    if (rep.laplacian.pass) rep.laplacian_violation.reset();
    rep.boundary_gradient = {edge_grad, 1.0 + 2.0 * h, edge_grad <= 1.0 + 2.0 * h};
    rep.period_condition = spec.period_condition();
    rep.angular_period = spec.angular_period();
    return rep;
}

}  // namespace flamefront
