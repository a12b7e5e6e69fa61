#pragma once

#include <string>
#include <string_view>

namespace flamefront {

enum class KernelShape {
    SmoothBump,  ///< exp(-1/(s(1-s)))
    PolyBump,    ///< 30 s^2 (1-s)^2
};

KernelShape kernel_shape_from_name(std::string_view name);
std::string kernel_shape_name(KernelShape shape);

/// The reaction profile beta: nonnegative, supported on [0, 1], with unit
/// mass 1/2. The normalisation constant is fixed at construction by adaptive
/// Simpson quadrature and re-verified; sup|beta'| is computed once and cached.
class BetaKernel {
public:
    explicit BetaKernel(KernelShape shape = KernelShape::SmoothBump, int derivative_samples = 4096);

    KernelShape shape() const { return shape_; }
    double normalization() const { return normalization_; }
    double quadrature_tolerance() const { return quadrature_tolerance_; }

    double operator()(double s) const { return beta(s); }
    double beta(double s) const { return normalization_ * unnormalized(s); }
    double derivative(double s) const;

    /// (1/eps) beta(u/eps). Subtracted in the PDE step.
    double reaction_sink(double u, double eps) const;

    /// sup over (0,1) of |beta'|.
    double derivative_bound() const { return derivative_bound_; }

    /// Integral of beta over [0, 1] by adaptive Simpson to the given tolerance.
    double mass(double tolerance = 1e-12) const;

private:
    double unnormalized(double s) const;
    double unnormalized_derivative(double s) const;
    double compute_derivative_bound(int samples) const;

    KernelShape shape_;
    double normalization_ = 1.0;
    double quadrature_tolerance_ = 1e-12;
    double derivative_bound_ = 0.0;
};

/// Adaptive Simpson quadrature of fn over [a, b].
template <class Fn>
double adaptive_simpson(Fn&& fn, double a, double b, double tolerance, int max_depth = 50);

}  // namespace flamefront

#include "flamefront/detail/quadrature.hpp"
