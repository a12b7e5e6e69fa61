#include "flamefront/reaction.hpp"

#include <algorithm>
#include <cmath>

#include "flamefront/error.hpp"

namespace flamefront {

KernelShape kernel_shape_from_name(std::string_view name) {
    if (name == "smooth_bump") return KernelShape::SmoothBump;
    if (name == "poly_bump") return KernelShape::PolyBump;
    throw ConfigError("unknown kernel name: " + std::string(name));
}

std::string kernel_shape_name(KernelShape shape) {
    return shape == KernelShape::SmoothBump ? "smooth_bump" : "poly_bump";
}

BetaKernel::BetaKernel(KernelShape shape, int derivative_samples) : shape_(shape) {
    if (derivative_samples < 16) throw ParameterError("derivative_samples must be at least 16");
    const double raw = adaptive_simpson([this](double s) { return unnormalized(s); }, 0.0, 1.0, 1e-14);
    normalization_ = 0.5 / raw;
    const double check = mass(quadrature_tolerance_);
    if (std::abs(check - 0.5) > 1e-10) {
        throw Error("beta kernel normalisation failed to reach mass 1/2");
    }
    derivative_bound_ = compute_derivative_bound(derivative_samples);
}

double BetaKernel::unnormalized(double s) const {
    if (!(s > 0.0) || !(s < 1.0)) return 0.0;
    const double q = s * (1.0 - s);
    if (shape_ == KernelShape::SmoothBump) return std::exp(-1.0 / q);
    return 30.0 * q * q;
}

double BetaKernel::unnormalized_derivative(double s) const {
    if (!(s > 0.0) || !(s < 1.0)) return 0.0;
    const double q = s * (1.0 - s);
    if (shape_ == KernelShape::SmoothBump) return std::exp(-1.0 / q) * (1.0 - 2.0 * s) / (q * q);
    return 60.0 * q * (1.0 - 2.0 * s);
}

double BetaKernel::derivative(double s) const { return normalization_ * unnormalized_derivative(s); }

double BetaKernel::reaction_sink(double u, double eps) const {
    if (!(eps > 0.0)) throw ParameterError("reaction_sink requires eps > 0");
    return beta(u / eps) / eps;
}

double BetaKernel::mass(double tolerance) const {
    return adaptive_simpson([this](double s) { return beta(s); }, 0.0, 1.0, tolerance);
}

double BetaKernel::compute_derivative_bound(int samples) const {
    auto slope = [this](double s) { return std::abs(derivative(s)); };
    const double step = 1.0 / samples;
    int best = 1;
    double best_value = -1.0;
    for (int k = 1; k < samples; ++k) {
        const double v = slope(k * step);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    // Golden-section refinement on the bracketing pair of sample intervals.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = (best - 1) * step;
    double b = (best + 1) * step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = slope(c), fd = slope(d);
    while (b - a > 1e-13) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = slope(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = slope(d);
        }
    }
    return std::max({best_value, fc, fd});
}

}  // namespace flamefront
