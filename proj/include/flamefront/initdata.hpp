#pragma once

#include <optional>
#include <string>

#include "flamefront/fields.hpp"
#include "flamefront/radial.hpp"

namespace flamefront {

/// u0 = phi0 + rho with the cap phi0 = A (1 - |x|^2)_+ and the angular
/// perturbation rho = amplitude * s(|x|) * cos^2(m theta / 2), where s is a C^2
/// bump supported on [envelope_lo, envelope_hi] with peak 1.
struct InitialDataSpec {
    double cap_amplitude = 0.5;
    double perturbation_amplitude = 0.0;
    int angular_mode = 12;
    double envelope_lo = 0.5;
    double envelope_hi = 0.9;
    /// Global size bound of the theorem hypotheses (support, gradient, peak).
    double M = 2.0;
    int dimension = 2;

    /// Angular period 2 pi / m.
    double angular_period() const;
    /// 2 pi / m <= perturbation_amplitude.
    bool period_condition() const;
    /// Radius of the support of u0.
    double support_radius() const;
};

/// C^2 bump on [lo, hi] with maximum 1 at the midpoint.
double envelope_bump(double r, double lo, double hi);

double cap_value(const InitialDataSpec& spec, double radius);
double perturbation_value(const InitialDataSpec& spec, double x, double y);

/// Samples u0 at grid nodes. Throws SpecificationError when the amplitude is
/// outside (0, 1/2], the envelope is malformed, the support leaves B_M, or the
/// grid does not strictly contain the support.
ScalarField build(const InitialDataSpec& spec, const GridSpec& grid);

/// Radially symmetric cap A (1 - r^2)_+ on a radial grid (perturbation ignored).
RadialField build_radial(const InitialDataSpec& spec, int dimension, double r_max, int cells);

struct CheckResult {
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ValidationReport {
    CheckResult support;           ///< (a) support radius <= M
    CheckResult gradient;          ///< (b) sup |grad u0| <= M
    CheckResult peak;              ///< (c) max phi0 >= 1/M (measured = A, bound = 1/M)
    CheckResult laplacian;         ///< max of discrete Lap u0 on the positivity-set interior <= 0
    CheckResult boundary_gradient; ///< max |grad u0| within 2 cells of the boundary <= 1 (+ stencil slack)
    bool period_condition = false;
    double angular_period = 0.0;
    /// Node with the largest Laplacian, when the check fails.
    std::optional<std::pair<double, double>> laplacian_violation;

    bool shrinking_support() const { return laplacian.pass && boundary_gradient.pass; }
    bool hypotheses() const { return support.pass && gradient.pass && peak.pass; }
};

/// Measures the theorem hypotheses (a)-(c) and the shrinking-support
/// condition on a sampled u0. Never throws on valid fields.
ValidationReport validate(const ScalarField& field, const InitialDataSpec& spec);

}  // namespace flamefront
