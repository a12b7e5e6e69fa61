#include "flamefront/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "flamefront/error.hpp"

namespace flamefront {

namespace {

BoundaryGeometry finish(double time, double level, double max_in, double min_out, double half_cell) {
    BoundaryGeometry g;
    g.time = time;
    g.level = level;
    if (max_in < 0.0) return g;  // empty positivity set
    g.extinct = false;
    g.r_out = max_in + half_cell;
    g.r_in = std::clamp(min_out - half_cell, 0.0, g.r_out);
    g.flatness = 1.0 - g.r_in / g.r_out;
    return g;
}

}  // namespace

BoundaryGeometry boundary_geometry(const ScalarField& field, double level) {
    if (!(level > 0.0)) throw ParameterError("geometry level must be positive");
    const GridSpec& grid = field.grid();
    const int n = field.nodes();
    double max_in2 = -1.0;
    double min_out2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double y = grid.coordinate(j);
        for (int i = 0; i < n; ++i) {
            const double x = grid.coordinate(i);
            const double d2 = x * x + y * y;
            if (field.at(i, j) > level) max_in2 = std::max(max_in2, d2);
            else min_out2 = std::min(min_out2, d2);
        }
    }
    const double max_in = max_in2 < 0.0 ? -1.0 : std::sqrt(max_in2);
    return finish(field.time(), level, max_in, std::sqrt(min_out2), 0.5 * grid.spacing());
}

BoundaryGeometry boundary_geometry(const RadialField& field, double level) {
    if (!(level > 0.0)) throw ParameterError("geometry level must be positive");
    double max_in = -1.0;
    double min_out = std::numeric_limits<double>::infinity();
    for (int k = 0; k < field.nodes(); ++k) {
        const double r = field.radius(k);
        if (field[k] > level) max_in = std::max(max_in, r);
        else min_out = std::min(min_out, r);
    }
    return finish(field.time(), level, max_in, min_out, 0.5 * field.spacing());
}

int minorant_angle_count(double r, double spacing) {
    return std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / spacing)));
}

RadialField radial_minorant(const ScalarField& field, int radial_samples) {
    if (radial_samples < 64) throw ParameterError("radial_minorant needs at least 64 radial samples");
    const double w = field.grid().half_width();
    RadialField out(2, w, radial_samples, field.time());
    const double h = field.grid().spacing();
    for (int k = 0; k <= radial_samples; ++k) {
        const double r = out.radius(k);
        const int m = minorant_angle_count(r, h);
        double lowest = std::numeric_limits<double>::infinity();
        for (int a = 0; a < m; ++a) {
            const double theta = 2.0 * std::numbers::pi * a / m;
            const double x = std::clamp(r * std::cos(theta), -w, w);
            const double y = std::clamp(r * std::sin(theta), -w, w);
            lowest = std::min(lowest, sample(field, {x, y}));
        }
        out[k] = std::max(lowest, 0.0);
    }
    out[radial_samples] = 0.0;
    return out;
}

}  // namespace flamefront
