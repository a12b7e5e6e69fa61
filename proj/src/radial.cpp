#include "flamefront/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "flamefront/detail/run_loop.hpp"
#include "flamefront/error.hpp"
#include "flamefront/solver.hpp"

namespace flamefront {

RadialField::RadialField(int dimension, double r_max, int cells, double time)
    : dimension_(dimension), r_max_(r_max), cells_(cells), values_(static_cast<std::size_t>(cells) + 1, 0.0),
      time_(time) {
    if (dimension < 1 || dimension > 6) throw ParameterError("radial dimension must be in 1..6");
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ParameterError("r_max must be positive");
    if (cells < 16) throw ParameterError("radial cells must be at least 16");
    spacing_ = r_max / static_cast<double>(cells);
}

RadialField::RadialField(int dimension, double r_max, std::vector<double> values, double time)
    : RadialField(dimension, r_max, static_cast<int>(values.size()) - 1, time) {
    values_ = std::move(values);
}

double RadialField::max_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
}

namespace {

double shell_volume(int k, int n) {
    if (k == 0) return std::pow(0.5, n) / n;
    return (std::pow(k + 0.5, n) - std::pow(k - 0.5, n)) / n;
}

struct Coefficients {
    std::vector<double> outer;  // weight on u_{k+1} - u_k
    std::vector<double> inner;  // weight on u_k - u_{k-1}
};

Coefficients coefficients(int n, int nodes) {
    Coefficients c;
    c.outer.resize(static_cast<std::size_t>(nodes), 0.0);
    c.inner.resize(static_cast<std::size_t>(nodes), 0.0);
    c.outer[0] = 2.0 * n;
    for (int k = 1; k < nodes; ++k) {
        const double v = shell_volume(k, n);
        c.outer[static_cast<std::size_t>(k)] = std::pow(k + 0.5, n - 1) / v;
        c.inner[static_cast<std::size_t>(k)] = std::pow(k - 0.5, n - 1) / v;
    }
    return c;
}

}  // namespace

double RadialField::mass() const {
    const int n = dimension_;
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
    double s = 0.0;
    for (int k = 0; k < nodes(); ++k) s += values_[static_cast<std::size_t>(k)] * shell_volume(k, n);
    return s * sphere * std::pow(spacing_, n);
}

double RadialField::at_radius(double r) const {
    if (r < 0.0) throw DomainError("negative radius");
    if (r >= r_max_) return 0.0;
    const double x = r / spacing_;
    const int k = std::min(static_cast<int>(x), cells_ - 1);
    const double w = x - k;
    return (1.0 - w) * values_[static_cast<std::size_t>(k)] + w * values_[static_cast<std::size_t>(k) + 1];
}

bool RadialField::satisfies_invariants() const {
    for (double v : values_) {
        if (!(v >= 0.0)) return false;
    }
    return values_.back() == 0.0;
}

RadialField radial_laplacian(const RadialField& field) {
    RadialField out(field.dimension(), field.r_max(), field.cells(), field.time());
    const Coefficients c = coefficients(field.dimension(), field.nodes());
    const double inv_h2 = 1.0 / (field.spacing() * field.spacing());
    out[0] = c.outer[0] * (field[1] - field[0]) * inv_h2;
    for (int k = 1; k < field.cells(); ++k) {
        const auto ks = static_cast<std::size_t>(k);
        out[k] = (c.outer[ks] * (field[k + 1] - field[k]) - c.inner[ks] * (field[k] - field[k - 1])) * inv_h2;
    }
    return out;
}

double radial_time_step(const RadialField& field, const SolverParams& params, const BetaKernel& kernel) {
    const double bound = stable_time_step(field.spacing(), field.dimension(), params.eps, params.cfl_safety, kernel);
    if (params.dt) {
        if (!(*params.dt > 0.0)) throw ConfigError("dt must be positive");
        if (*params.dt > bound) throw ConfigError("dt exceeds the explicit stability bound");
        return *params.dt;
    }
    return bound;
}

namespace {

class RadialStepper {
public:
    RadialStepper(int dimension, int nodes, double spacing, double eps, const BetaKernel& kernel)
        : coef_(coefficients(dimension, nodes)), inv_h2_(1.0 / (spacing * spacing)), eps_(eps), kernel_(kernel) {}

    void operator()(const RadialField& in, RadialField& out, double dt) const {
        const int last = in.cells();
        for (int k = 0; k < last; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            const double c = in[k];
            const double outer = in[k + 1];
            const double inner = k > 0 ? in[k - 1] : outer;
            const double lap = (coef_.outer[ks] * (outer - c) - coef_.inner[ks] * (c - inner)) * inv_h2_;
            const double sink = (c > 0.0 && c < eps_) ? std::min(kernel_.reaction_sink(c, eps_), c / dt) : 0.0;
            const double next = c + dt * (lap - sink);
            out[k] = std::clamp(next, 0.0, std::max({c, inner, outer}));
        }
        out[last] = 0.0;
    }

private:
    Coefficients coef_;
    double inv_h2_;
    double eps_;
    const BetaKernel& kernel_;
};

}  // namespace

void radial_step_into(const RadialField& in, RadialField& out, double dt, double eps, const BetaKernel& kernel) {
    RadialStepper(in.dimension(), in.nodes(), in.spacing(), eps, kernel)(in, out, dt);
}

RadialField radial_step(const RadialField& field, const SolverParams& params, const BetaKernel& kernel) {
    const double dt = radial_time_step(field, params, kernel);
    RadialField out(field.dimension(), field.r_max(), field.cells(), field.time() + dt);
    radial_step_into(field, out, dt, params.eps, kernel);
    return out;
}

RadialRunRecord radial_run(const RadialField& initial, const SolverParams& params, const BetaKernel& kernel,
                           const RadialObserver& observer) {
    if (!initial.satisfies_invariants()) {
        throw PreconditionError("initial radial field must be nonnegative and vanish at r_max");
    }
    const double dt = radial_time_step(initial, params, kernel);
    const RadialStepper stepper(initial.dimension(), initial.nodes(), initial.spacing(), params.eps, kernel);
    return detail::run_loop(
        initial, params, dt, stepper, [&](const RadialField& f, const SeriesSample& s) {
            if (observer) observer(f, s);
        });
}

namespace {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string radial_snapshot_header(const RadialField& field) {
    return "FLAMERAD v1 n=" + std::to_string(field.dimension()) + " cells=" + std::to_string(field.cells()) +
           " h=" + format_real(field.spacing()) + " t=" + format_real(field.time());
}

void write_radial_snapshot(const RadialField& field, std::ostream& out) {
    out << radial_snapshot_header(field) << '\n';
    for (double v : field.values()) out << format_real(v) << '\n';
}

RadialField read_radial_snapshot(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty radial snapshot");
    std::istringstream hdr(line);
    std::string magic, version, tok;
    hdr >> magic >> version;
    if (magic != "FLAMERAD" || version != "v1") throw IoError("not a FLAMERAD v1 snapshot");
    int n = 0, cells = 0;
    double h = 0.0, t = 0.0;
    int seen = 0;
    while (hdr >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw IoError("malformed radial header token: " + tok);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "n") n = std::stoi(val);
            else if (key == "cells") cells = std::stoi(val);
            else if (key == "h") h = std::stod(val);
            else if (key == "t") t = std::stod(val);
            else throw IoError("unknown radial header key: " + key);
        } catch (const std::logic_error&) {
            throw IoError("unparsable radial header value: " + tok);
        }
        ++seen;
    }
    if (seen != 4) throw IoError("incomplete radial header");
    std::vector<double> values(static_cast<std::size_t>(cells) + 1);
    for (double& v : values) {
        if (!(in >> v)) throw IoError("radial snapshot truncated");
    }
    return RadialField(n, h * cells, std::move(values), t);
}

}  // namespace flamefront
