#pragma once

#include <span>
#include <vector>

namespace flamefront {

enum class ProfileIntegrator {
    RungeKutta4,      ///< classical RK4, step-doubling error control
    DormandPrince54,  ///< embedded 5(4) pair
};

struct ProfileOptions {
    /// Value of the unscaled profile at the origin. The ODE is linear and
    /// homogeneous, so this only changes the intermediate scaling.
    double initial_value = 1.0;
    ProfileIntegrator integrator = ProfileIntegrator::RungeKutta4;
    /// Upper bound on the step, which is also the table spacing.
    double max_step = 1e-3;
    /// Series start radius.
    double r_start = 1e-4;
    /// Give up when no zero is found before this radius.
    double r_limit = 50.0;
};

struct ProfileSample {
    double r = 0.0;
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;
};

/// Radial profile f of the self-similar extinction solution
///   U(x, t) = sqrt(T - t) f(|x| / sqrt(T - t)),
/// with f'' + ((n-1)/r - r/2) f' + f/2 = 0 on (0, R), f'(0) = 0, f > 0 on
/// [0, R), f(R) = 0, f'(R) = -1. peak() is a1 = f(0), support_radius() is a2 = R.
class SelfSimilarProfile {
public:
    SelfSimilarProfile() = default;
    SelfSimilarProfile(int dimension, double support_radius, double peak, std::vector<ProfileSample> samples);

    int dimension() const { return dimension_; }
    double support_radius() const { return support_radius_; }
    double peak() const { return peak_; }
    std::span<const ProfileSample> samples() const { return samples_; }

    /// sup of |f'' + ((n-1)/r - r/2) f' + f/2| over evenly spaced points of
    /// [0, R], with f, f', f'' taken from the interpolants between table nodes.
    double ode_residual_sup() const { return ode_residual_sup_; }
    /// sup over interior table nodes of |f''(ODE) - centred difference of f'|.
    double difference_check() const { return difference_check_; }
    /// f' <= 0 held at every table node.
    bool monotone() const { return monotone_; }

    /// Cubic Hermite interpolation of f; 0 beyond R.
    double value(double r) const;
    /// Cubic Hermite interpolation of f' (from f' and f''); 0 beyond R.
    double derivative(double r) const;
    /// Derivative of the f' interpolant.
    double second_derivative(double r) const;

    /// Residual of the ODE at r, with the regular limit n f''(0) + f(0)/2 at 0.
    double residual_at(double r) const;
    double residual_sup(int points) const;

private:
    std::size_t interval(double r) const;

    int dimension_ = 0;
    double support_radius_ = 0.0;
    double peak_ = 0.0;
    std::vector<ProfileSample> samples_;
    double ode_residual_sup_ = 0.0;
    double difference_check_ = 0.0;
    bool monotone_ = true;
};

/// Shoots from the origin with the series start f ~ 1 - r^2/(4n), locates the
/// first zero, and rescales so that f'(R) = -1. Throws ProfileNotFoundError
/// when no zero appears before options.r_limit.
SelfSimilarProfile solve_profile(int n, double tolerance = 1e-12, const ProfileOptions& options = {});

double eval_profile(const SelfSimilarProfile& profile, double r);

/// sqrt(T - t) f(|x| / sqrt(T - t)); 0 at t = T; DomainError for t > T.
double self_similar_U(const SelfSimilarProfile& profile, std::span<const double> x, double t, double T);
double self_similar_U_radius(const SelfSimilarProfile& profile, double radius, double t, double T);

}  // namespace flamefront
