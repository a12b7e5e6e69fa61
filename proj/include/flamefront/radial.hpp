#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "flamefront/reaction.hpp"
#include "flamefront/record.hpp"

namespace flamefront {

/// Radially symmetric u(r, t) in dimension n on nodes r_k = k h, k = 0..cells,
/// with r_max = cells * h. The last node carries the Dirichlet condition; the
/// symmetry condition u_r(0) = 0 is built into the operator.
class RadialField {
public:
    RadialField() = default;
    RadialField(int dimension, double r_max, int cells, double time = 0.0);
    RadialField(int dimension, double r_max, std::vector<double> values, double time);

    template <class Fn>
    static RadialField from_function(int dimension, double r_max, int cells, Fn&& fn, double time = 0.0) {
        RadialField f(dimension, r_max, cells, time);
        for (int k = 0; k < cells; ++k) f.values_[static_cast<std::size_t>(k)] = fn(f.radius(k));
        return f;
    }

    int dimension() const { return dimension_; }
    double r_max() const { return r_max_; }
    int cells() const { return cells_; }
    int nodes() const { return cells_ + 1; }
    double spacing() const { return spacing_; }
    double radius(int k) const { return static_cast<double>(k) * spacing_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double& operator[](int k) { return values_[static_cast<std::size_t>(k)]; }
    double operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double max_value() const;
    /// Discrete integral of u over the ball of radius r_max in R^n.
    double mass() const;
    /// Linear interpolation in r; 0 beyond r_max.
    double at_radius(double r) const;

    bool satisfies_invariants() const;

    bool operator==(const RadialField&) const = default;

private:
    int dimension_ = 2;
    double r_max_ = 1.0;
    int cells_ = 16;
    double spacing_ = 1.0 / 16;
    std::vector<double> values_;
    double time_ = 0.0;
};

using RadialRunRecord = BasicRunRecord<RadialField>;
using RadialObserver = std::function<void(const RadialField&, const SeriesSample&)>;

/// Conservative discretisation of u_rr + (n-1)/r u_r: flux differences across
/// r_{k +- 1/2} weighted by r^{n-1}, divided by the discrete shell volume. At
/// the origin it reduces to 2n (u_1 - u_0) / h^2; it is exact on constants and
/// on r^2, and reduces to the plain second difference for n = 1.
RadialField radial_laplacian(const RadialField& field);

double radial_time_step(const RadialField& field, const SolverParams& params, const BetaKernel& kernel);

void radial_step_into(const RadialField& in, RadialField& out, double dt, double eps, const BetaKernel& kernel);
RadialField radial_step(const RadialField& field, const SolverParams& params, const BetaKernel& kernel);
RadialRunRecord radial_run(const RadialField& initial, const SolverParams& params, const BetaKernel& kernel,
                           const RadialObserver& observer = {});

std::string radial_snapshot_header(const RadialField& field);
void write_radial_snapshot(const RadialField& field, std::ostream& out);
RadialField read_radial_snapshot(std::istream& in);

}  // namespace flamefront
