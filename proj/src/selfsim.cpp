#include "flamefront/selfsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "flamefront/error.hpp"

namespace flamefront {

namespace {

using State = std::array<double, 2>;  // (f, f')

State rhs(int n, double r, const State& y) {
    return {y[1], -((n - 1) / r - 0.5 * r) * y[1] - 0.5 * y[0]};
}

State axpy(const State& y, double h, const State& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }

State rk4_step(int n, double r, const State& y, double h) {
    const State k1 = rhs(n, r, y);
    const State k2 = rhs(n, r + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = rhs(n, r + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = rhs(n, r + h, axpy(y, h, k3));
    return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

struct EmbeddedStep {
    State high;
    double error;
};

EmbeddedStep dormand_prince_step(int n, double r, const State& y, double h) {
    const State k1 = rhs(n, r, y);
    auto combo = [&](std::initializer_list<std::pair<double, const State*>> terms) {
        State out = y;
        for (const auto& [a, k] : terms) {
            out[0] += h * a * (*k)[0];
            out[1] += h * a * (*k)[1];
        }
        return out;
    };
    const State k2 = rhs(n, r + h / 5.0, combo({{1.0 / 5.0, &k1}}));
    const State k3 = rhs(n, r + 3.0 * h / 10.0, combo({{3.0 / 40.0, &k1}, {9.0 / 40.0, &k2}}));
    const State k4 = rhs(n, r + 4.0 * h / 5.0, combo({{44.0 / 45.0, &k1}, {-56.0 / 15.0, &k2}, {32.0 / 9.0, &k3}}));
    const State k5 = rhs(n, r + 8.0 * h / 9.0,
                         combo({{19372.0 / 6561.0, &k1}, {-25360.0 / 2187.0, &k2}, {64448.0 / 6561.0, &k3},
                                {-212.0 / 729.0, &k4}}));
    const State k6 = rhs(n, r + h,
                         combo({{9017.0 / 3168.0, &k1}, {-355.0 / 33.0, &k2}, {46732.0 / 5247.0, &k3},
                                {49.0 / 176.0, &k4}, {-5103.0 / 18656.0, &k5}}));
    const State high = combo({{35.0 / 384.0, &k1}, {500.0 / 1113.0, &k3}, {125.0 / 192.0, &k4},
                              {-2187.0 / 6784.0, &k5}, {11.0 / 84.0, &k6}});
    const State k7 = rhs(n, r + h, high);
    const State low = combo({{5179.0 / 57600.0, &k1}, {7571.0 / 16695.0, &k3}, {393.0 / 640.0, &k4},
                             {-92097.0 / 339200.0, &k5}, {187.0 / 2100.0, &k6}, {1.0 / 40.0, &k7}});
    return {high, std::max(std::abs(high[0] - low[0]), std::abs(high[1] - low[1]))};
}

/// One controlled step attempt: returns the proposed state and its error estimate.
EmbeddedStep attempt(ProfileIntegrator method, int n, double r, const State& y, double h) {
    if (method == ProfileIntegrator::DormandPrince54) return dormand_prince_step(n, r, y, h);
    const State full = rk4_step(n, r, y, h);
    const State half = rk4_step(n, r + 0.5 * h, rk4_step(n, r, y, 0.5 * h), 0.5 * h);
    const double err = std::max(std::abs(half[0] - full[0]), std::abs(half[1] - full[1])) / 15.0;
    return {half, err};
}

/// Uncontrolled single step used inside the bisection for the zero.
State plain_step(ProfileIntegrator method, int n, double r, const State& y, double h) {
    if (method == ProfileIntegrator::DormandPrince54) return dormand_prince_step(n, r, y, h).high;
    return rk4_step(n, r + 0.5 * h, rk4_step(n, r, y, 0.5 * h), 0.5 * h);
}

double ode_second_derivative(int n, double r, double f, double df) {
    if (r == 0.0) return -f / (2.0 * n);
    return -((n - 1) / r - 0.5 * r) * df - 0.5 * f;
}

double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

double hermite_slope(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * h * d1) / h;
}

}  // namespace

SelfSimilarProfile::SelfSimilarProfile(int dimension, double support_radius, double peak,
                                       std::vector<ProfileSample> samples)
    : dimension_(dimension), support_radius_(support_radius), peak_(peak), samples_(std::move(samples)) {
    if (samples_.size() < 2) throw ParameterError("profile table needs at least two samples");
    for (const auto& s : samples_) monotone_ = monotone_ && s.df <= 0.0;
    for (std::size_t k = 1; k + 1 < samples_.size(); ++k) {
        const auto& a = samples_[k - 1];
        const auto& b = samples_[k];
        const auto& c = samples_[k + 1];
        // Second-order difference of f' on the nonuniform stencil.
        const double hl = b.r - a.r, hr = c.r - b.r;
        const double diff = (hl * hl * (c.df - b.df) + hr * hr * (b.df - a.df)) / (hl * hr * (hl + hr));
        difference_check_ = std::max(difference_check_, std::abs(diff - b.d2f));
    }
    ode_residual_sup_ = residual_sup(1000);
}

std::size_t SelfSimilarProfile::interval(double r) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), r,
                                     [](double x, const ProfileSample& s) { return x < s.r; });
    const auto idx = static_cast<std::size_t>(std::distance(samples_.begin(), it));
    return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, samples_.size() - 2);
}

double SelfSimilarProfile::value(double r) const {
    if (r > support_radius_) return 0.0;
    if (r <= 0.0) return samples_.front().f;
    const std::size_t k = interval(r);
    const auto& a = samples_[k];
    const auto& b = samples_[k + 1];
    return hermite(a.r, b.r, a.f, b.f, a.df, b.df, r);
}

double SelfSimilarProfile::derivative(double r) const {
    if (r > support_radius_) return 0.0;
    if (r <= 0.0) return samples_.front().df;
    const std::size_t k = interval(r);
    const auto& a = samples_[k];
    const auto& b = samples_[k + 1];
    return hermite(a.r, b.r, a.df, b.df, a.d2f, b.d2f, r);
}

double SelfSimilarProfile::second_derivative(double r) const {
    if (r > support_radius_) return 0.0;
    if (r <= 0.0) return samples_.front().d2f;
    const std::size_t k = interval(r);
    const auto& a = samples_[k];
    const auto& b = samples_[k + 1];
    return hermite_slope(a.r, b.r, a.df, b.df, a.d2f, b.d2f, r);
}

double SelfSimilarProfile::residual_at(double r) const {
    const int n = dimension_;
    const double f = value(r), df = derivative(r), d2f = second_derivative(r);
    if (r == 0.0) return n * d2f + 0.5 * f;
    return d2f + ((n - 1) / r - 0.5 * r) * df + 0.5 * f;
}

double SelfSimilarProfile::residual_sup(int points) const {
    double worst = 0.0;
    for (int j = 0; j < points; ++j) {
        const double r = support_radius_ * j / (points - 1);
        worst = std::max(worst, std::abs(residual_at(r)));
    }
    return worst;
}

SelfSimilarProfile solve_profile(int n, double tolerance, const ProfileOptions& options) {
    if (n < 1) throw ParameterError("profile dimension must be at least 1");
    if (!(tolerance >= 1e-12 && tolerance <= 1e-6)) throw ParameterError("profile tolerance must lie in [1e-12, 1e-6]");
    if (!(options.initial_value > 0.0)) throw ParameterError("profile initial value must be positive");
    if (!(options.max_step > 0.0) || !(options.r_start > 0.0)) throw ParameterError("profile steps must be positive");

    const double f0 = options.initial_value;
    // Regular limit at the origin: n f''(0) = -f(0)/2.
    const double r0 = options.r_start;
    State y{f0 * (1.0 - r0 * r0 / (4.0 * n)), -f0 * r0 / (2.0 * n)};
    double r = r0;

    std::vector<ProfileSample> raw;
    raw.push_back({0.0, f0, 0.0, -f0 / (2.0 * n)});
    raw.push_back({r, y[0], y[1], ode_second_derivative(n, r, y[0], y[1])});

    double h = std::min(options.max_step, 0.1 * r0);
    const double per_unit = tolerance * f0;
    bool found = false;
    double root = 0.0;
    State at_root{};
    while (r < options.r_limit) {
        h = std::min(h, options.max_step);
        const EmbeddedStep trial = attempt(options.integrator, n, r, y, h);
        // Error per unit step, floored so that roundoff never forces a collapse.
        const double allowed = per_unit * std::max(h, 1e-2);
        if (trial.error > allowed && h > 1e-14) {
            h *= std::max(0.2, 0.9 * std::pow(allowed / trial.error, 0.2));
            continue;
        }
        if (trial.high[0] <= 0.0) {
            // Bisect on the step length from the last positive node.
            double lo = 0.0, hi = h;
            while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * (r + hi)) {
                const double mid = 0.5 * (lo + hi);
                if (plain_step(options.integrator, n, r, y, mid)[0] > 0.0) lo = mid;
                else hi = mid;
                if (mid == lo && mid == hi) break;
            }
            const double s = 0.5 * (lo + hi);
            root = r + s;
            at_root = plain_step(options.integrator, n, r, y, s);
            found = true;
            break;
        }
        r += h;
        y = trial.high;
        raw.push_back({r, y[0], y[1], ode_second_derivative(n, r, y[0], y[1])});
        const double grow = trial.error > 0.0 ? 0.9 * std::pow(allowed / trial.error, 0.2) : 2.0;
        h *= std::clamp(grow, 0.2, 2.0);
    }
    if (!found) {
        throw ProfileNotFoundError("no zero of the self-similar profile before r = " + std::to_string(options.r_limit) +
                                   " for n = " + std::to_string(n));
    }
    if (!(at_root[1] < 0.0)) throw ProfileNotFoundError("profile crosses zero with nonnegative slope");
    if (root - raw.back().r < 1e-9) raw.pop_back();
    raw.push_back({root, at_root[0], at_root[1], ode_second_derivative(n, root, at_root[0], at_root[1])});

    const double lambda = -1.0 / at_root[1];
    for (auto& s : raw) {
        s.f *= lambda;
        s.df *= lambda;
        s.d2f *= lambda;
    }
    const double peak = raw.front().f;
    return SelfSimilarProfile(n, root, peak, std::move(raw));
}

double eval_profile(const SelfSimilarProfile& profile, double r) {
    if (r < 0.0) throw DomainError("profile radius must be nonnegative");
    return profile.value(r);
}

double self_similar_U_radius(const SelfSimilarProfile& profile, double radius, double t, double T) {
    if (t > T) throw DomainError("self-similar solution is undefined after the extinction time");
    if (t == T) return 0.0;
    const double s = std::sqrt(T - t);
    return s * profile.value(radius / s);
}

double self_similar_U(const SelfSimilarProfile& profile, std::span<const double> x, double t, double T) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return self_similar_U_radius(profile, std::sqrt(r2), t, T);
}

}  // namespace flamefront
