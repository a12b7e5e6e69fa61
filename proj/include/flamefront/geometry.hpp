#pragma once

#include "flamefront/fields.hpp"
#include "flamefront/radial.hpp"

namespace flamefront {

/// Origin-centred inscribed / circumscribed radii of the discrete positivity
/// set {u > level} of one snapshot.
struct BoundaryGeometry {
    double time = 0.0;
    double r_in = 0.0;
    double r_out = 0.0;
    /// 1 - r_in / r_out, or 0 when extinct.
    double flatness = 0.0;
    double level = 0.0;
    bool extinct = true;

    bool operator==(const BoundaryGeometry&) const = default;
};

/// r_out is the largest node distance inside the set plus half a cell; r_in
/// the smallest node distance outside it minus half a cell, clamped to
/// [0, r_out]. Throws ParameterError for level <= 0.
BoundaryGeometry boundary_geometry(const ScalarField& field, double level);

/// Same measurement for a radial snapshot (nodes on the ray).
BoundaryGeometry boundary_geometry(const RadialField& field, double level);

/// Largest radial function below the field: at each of radial_samples + 1
/// radius nodes on [0, W], the minimum of bilinear samples over
/// max(64, ceil(2 pi r / h)) equally spaced angles.
RadialField radial_minorant(const ScalarField& field, int radial_samples);

/// Angular sample count used by radial_minorant at radius r.
int minorant_angle_count(double r, double spacing);

}  // namespace flamefront
