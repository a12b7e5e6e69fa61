#include "flamefront/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "flamefront/error.hpp"
#include "flamefront/experiment.hpp"
#include "flamefront/geometry.hpp"
#include "flamefront/selfsim.hpp"
#include "flamefront/solver.hpp"

namespace flamefront {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string printf_string(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

std::string canonical_fixture_text(const std::vector<ProfileFixture>& fixtures) {
    std::string s;
    for (const ProfileFixture& f : fixtures) {
        s += std::to_string(f.n) + " " + format_real(f.R) + " " + format_real(f.a1) + "\n";
    }
    return s;
}

}  // namespace

std::string fixture_checksum(const std::vector<ProfileFixture>& fixtures) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_fixture_text(fixtures)) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string render_profile_fixtures(const std::vector<ProfileFixture>& fixtures) {
    nlohmann::ordered_json j;
    j["profiles"] = nlohmann::ordered_json::array();
    for (const ProfileFixture& f : fixtures) j["profiles"].push_back({{"n", f.n}, {"R", f.R}, {"a1", f.a1}});
    j["checksum"] = fixture_checksum(fixtures);
    return j.dump(2) + "\n";
}

std::vector<ProfileFixture> load_profile_fixtures(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FixtureIntegrityError("cannot read fixtures file " + path.string());
    std::vector<ProfileFixture> out;
    std::string stored;
    try {
        const nlohmann::json j = nlohmann::json::parse(in);
        for (const auto& p : j.at("profiles")) {
            out.push_back({p.at("n").get<int>(), p.at("R").get<double>(), p.at("a1").get<double>()});
        }
        stored = j.at("checksum").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FixtureIntegrityError("malformed fixtures file " + path.string() + ": " + e.what());
    }
    if (out.empty()) throw FixtureIntegrityError("fixtures file " + path.string() + " lists no profiles");
    const std::string actual = fixture_checksum(out);
    if (actual != stored) {
        throw FixtureIntegrityError("fixtures file " + path.string() + " failed its checksum (stored " + stored +
                                    ", computed " + actual + ")");
    }
    return out;
}

VerifyLevel verify_level_from_name(const std::string& name) {
    if (name == "quick") return VerifyLevel::Quick;
    if (name == "full") return VerifyLevel::Full;
    throw ConfigError("unknown verify level " + name + " (expected quick or full)");
}

std::string verify_level_name(VerifyLevel level) { return level == VerifyLevel::Full ? "full" : "quick"; }

bool VerifyReport::all_pass() const {
    return !results.empty() && std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

std::string format_criterion(const CriterionResult& r) {
    return printf_string("%s %2d  %-30s %s (%.2f s)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                         r.detail.c_str(), r.seconds);
}

namespace {

/// Running tally for the maximum principle over every run the suite makes.
struct MaxPrinciple {
    double max_increase = 0.0;
    double min_value = std::numeric_limits<double>::infinity();
    int runs = 0;

    template <class Record>
    void add(const Record& r) {
        max_increase = std::max(max_increase, r.max_increase);
        min_value = std::min(min_value, r.min_value);
        ++runs;
    }
};

class Suite {
public:
    explicit Suite(const VerifyOptions& options) : opt_(options), full_(options.level == VerifyLevel::Full) {}

    VerifyReport run() {
        fixtures_ = load_profile_fixtures(opt_.fixtures);
        report_.level = opt_.level;
        criterion(1, "self-similar profile", [&](CriterionResult& r) { profile(r); });
        criterion(2, "self-similar reproduction", [&](CriterionResult& r) { reproduction(r); });
        criterion(3, "sqrt(T - t) law", [&](CriterionResult& r) { sqrt_law(r); });
        criterion(4, "flatness decay", [&](CriterionResult& r) { flatness(r); });
        criterion(5, "interior monotone improvement", [&](CriterionResult& r) { interior(r); });
        criterion(6, "comparison principle", [&](CriterionResult& r) { comparison(r); });
        criterion(8, "geometry oracles", [&](CriterionResult& r) { geometry_oracles(r); });
        criterion(9, "eps-limit consistency", [&](CriterionResult& r) { eps_limit(r); });
        criterion(10, "determinism", [&](CriterionResult& r) { determinism(r); });
        criterion(7, "discrete maximum principle", [&](CriterionResult& r) { maximum_principle(r); });
        std::sort(report_.results.begin(), report_.results.end(),
                  [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
        return report_;
    }

private:
    template <class Fn>
    void criterion(int id, const char* name, Fn&& fn) {
        CriterionResult r{id, name, false, {}, 0.0};
        const auto start = Clock::now();
        try {
            fn(r);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = seconds_since(start);
        if (r.pass && budget_ > 0.0 && r.seconds > budget_) {
            r.pass = false;
            r.detail += printf_string(" over the %.0f s budget", budget_);
        }
        budget_ = 0.0;
        report_.results.push_back(r);
        if (opt_.on_result) opt_.on_result(r);
    }

    ExperimentResult execute_tracked(const RunConfig& c) {
        ExperimentResult out = execute(c);
        tally_.max_increase = std::max(tally_.max_increase, out.max_increase);
        tally_.min_value = std::min(tally_.min_value, out.min_value);
        ++tally_.runs;
        return out;
    }

    void profile(CriterionResult& r) {
        double worst_value = 0.0, worst_slope = 0.0, worst_residual = 0.0, worst_halving = 0.0, worst_pair = 0.0;
        double worst_fixture = 0.0;
        double solve_seconds = 0.0;
        for (int n = 1; n <= 3; ++n) {
            const auto start = Clock::now();
            const SelfSimilarProfile p = solve_profile(n, 1e-12);
            solve_seconds += seconds_since(start);
            const double R = p.support_radius();
            worst_value = std::max(worst_value, std::abs(p.value(R)));
            worst_slope = std::max(worst_slope, std::abs(p.derivative(R) + 1.0));
            worst_residual = std::max(worst_residual, p.residual_sup(1000));
            ProfileOptions halved;
            halved.max_step = 0.5e-3;
            worst_halving = std::max(worst_halving, std::abs(solve_profile(n, 1e-12, halved).support_radius() - R));
            ProfileOptions dp;
            dp.integrator = ProfileIntegrator::DormandPrince54;
            worst_pair = std::max(worst_pair, std::abs(solve_profile(n, 1e-12, dp).support_radius() - R));
            const auto fx = std::find_if(fixtures_.begin(), fixtures_.end(),
                                         [&](const ProfileFixture& f) { return f.n == n; });
            if (fx == fixtures_.end()) throw FixtureIntegrityError("fixtures lack n = " + std::to_string(n));
            worst_fixture = std::max({worst_fixture, std::abs(fx->R - R), std::abs(fx->a1 - p.peak())});
        }
        r.pass = worst_value <= 1e-8 && worst_slope <= 1e-8 && worst_residual <= 1e-8 && worst_halving <= 1e-9 &&
                 worst_pair <= 1e-9 && worst_fixture <= 1e-8 && solve_seconds < 1.0;
        r.detail = printf_string("|f(R)| %.1e |f'(R)+1| %.1e residual %.1e dR(halving) %.1e dR(RK4/DP) %.1e "
                                 "fixtures %.1e solve %.3f s",
                                 worst_value, worst_slope, worst_residual, worst_halving, worst_pair, worst_fixture,
                                 solve_seconds);
    }

    static RunConfig radial_config(double eps, double r_max, int cells) {
        RunConfig c;
        c.geometry = GeometryKind::Radial;
        c.initial.dimension = 2;
        c.half_width = r_max;
        c.cells = cells;
        c.solver.eps = eps;
        return c;
    }

    void reproduction(CriterionResult& r) {
        budget_ = 60.0;
        const double a1 = solve_profile(2, 1e-12).peak();
        const double r_max = 3.0;
        const double eps0 = 0.02;
        const int per_unit = 256;
        double T_err[2], ss_err[2];
        for (int level = 0; level < 2; ++level) {
            RunConfig c = radial_config(eps0 / (1 << level), r_max, static_cast<int>(r_max * per_unit) << level);
            c.initial_kind = InitialKind::SelfSimilar;
            c.self_similar_T = 1.0;
            c.record_times = {0.5};
            const ExperimentResult out = execute_tracked(c);
            if (!out.analysis.extinction) throw EstimationError("self-similar run did not go extinct");
            if (out.analysis.self_similar_errors.empty()) throw EstimationError("no snapshot before T_hat");
            T_err[level] = std::abs(out.analysis.extinction->T_hat - 1.0);
            ss_err[level] = out.analysis.self_similar_errors.front().error / a1;
        }
        r.pass = T_err[0] <= 0.05 && ss_err[0] <= 0.10 && T_err[1] < T_err[0] && ss_err[1] < ss_err[0];
        r.detail = printf_string("eps %g h 1/%d: |T_hat-1| %.4f err(0.5)/a1 %.4f; eps %g h 1/%d: %.4f %.4f", eps0,
                                 per_unit, T_err[0], ss_err[0], eps0 / 2, 2 * per_unit, T_err[1], ss_err[1]);
    }

    void sqrt_law(CriterionResult& r) {
        budget_ = 60.0;
        const ExperimentResult out = execute_tracked(radial_config(0.02, 1.5, 384));
        if (!out.analysis.sqrt_law) throw EstimationError("no sqrt-law window");
        const SqrtLawRatio& s = *out.analysis.sqrt_law;
        const double spread = s.max_ratio / s.min_ratio;
        r.pass = s.used > 0 && spread <= 2.0;
        r.detail = printf_string("T_hat %.5f ratio in [%.4f, %.4f], max/min %.4f over %d samples",
                                 out.analysis.extinction->T_hat, s.min_ratio, s.max_ratio, spread, s.used);
    }

    const ExperimentResult& flame_run() {
        if (!flame_) {
            RunConfig c;
            c.geometry = GeometryKind::Cartesian;
            c.half_width = 1.1;
            c.cells = full_ ? 512 : 256;
            c.solver.eps = full_ ? 0.02 : 0.04;
            c.initial.cap_amplitude = 0.5;
            c.initial.perturbation_amplitude = 0.1;
            c.initial.angular_mode = 12;
            c.dyadic = true;
            c.dyadic_levels = 12;
            flame_ = execute_tracked(c);
        }
        return *flame_;
    }

    void flatness(CriterionResult& r) {
        budget_ = 900.0;
        const ExperimentResult& out = flame_run();
        const auto& a = out.analysis;
        std::string levels;
        std::vector<std::pair<int, double>> resolved;
        for (const DyadicFlatness& lv : a.flatness_levels) {
            if (lv.k < 2 || lv.geometry.extinct) continue;
            levels += printf_string(" k%d:%.4f%s", lv.k, lv.geometry.flatness, lv.resolved ? "" : "*");
            if (lv.resolved) resolved.emplace_back(lv.k, lv.geometry.flatness);
        }
        bool nonincreasing = true, contracting = true;
        for (std::size_t i = 1; i < resolved.size(); ++i) nonincreasing &= resolved[i].second <= resolved[i - 1].second;
        for (const auto& [k, d] : resolved) {
            for (const auto& [k2, d2] : resolved) {
                if (k2 == k + 2) contracting &= d2 <= 0.8 * d;
            }
        }
        const std::string grid = printf_string("%d^2 eps %g:", out.config.cells, out.config.solver.eps);
        if (!a.flatness_fit) {
            r.pass = false;
            r.detail = grid + " " + a.flatness_fit_error + ";" + levels + " (* below floor 2h/r_in)";
            return;
        }
        const FlatnessFit& f = *a.flatness_fit;
        r.pass = nonincreasing && contracting && f.h_hat < 1.0 && f.log_fit_residual < 0.25;
        r.detail = grid + printf_string(" h_hat %.4f residual %.4f nonincreasing %d contraction %d;", f.h_hat,
                                        f.log_fit_residual, nonincreasing, contracting) +
                   levels;
    }

    void interior(CriterionResult& r) {
        const ExperimentResult& out = flame_run();
        std::vector<std::pair<int, double>> ratios;
        std::string text;
        for (const InteriorRatioEntry& e : out.analysis.interior_ratios) {
            if (e.k < 2 || !e.ratio) continue;
            ratios.emplace_back(e.k, e.ratio->ratio);
            text += printf_string(" k%d:%.2e", e.k, e.ratio->ratio);
        }
        bool monotone = ratios.size() >= 2;
        int first_rise = 0;
        for (std::size_t i = 1; i < ratios.size(); ++i) {
            if (ratios[i].second > ratios[i - 1].second) {
                monotone = false;
                if (!first_rise) first_rise = ratios[i].first;
            }
        }
        r.pass = monotone;
        r.detail = printf_string("%zu resolved levels", ratios.size()) +
                   (first_rise ? printf_string(", rises at k=%d;", first_rise) : std::string(";")) + text;
    }

    void comparison(CriterionResult& r) {
        InitialDataSpec spec;
        const GridSpec grid(1.1, full_ ? 256 : 128);
        const ScalarField low = build(spec, grid);
        ScalarField high = low;
        for (double& v : high.values()) v *= 1.1;
        SolverParams p;
        p.eps = full_ ? 0.02 : 0.04;
        p.cfl_safety = 0.9;
        p.series_stride = 10;
        p.record_times = dyadic_times(0.18, 8).times;
        const OrderedPairResult pair = run_pair_ordered(low, high, p, BetaKernel());
        tally_.add(pair.low);
        tally_.add(pair.high);
        double recorded = 0.0;
        for (std::size_t i = 0; i < std::min(pair.low.snapshots.size(), pair.high.snapshots.size()); ++i) {
            const auto a = pair.low.snapshots[i].values();
            const auto b = pair.high.snapshots[i].values();
            for (std::size_t k = 0; k < a.size(); ++k) recorded = std::max(recorded, a[k] - b[k]);
        }
        r.pass = pair.ordering_violation <= 1e-12 && recorded <= 1e-12;
        r.detail = printf_string("%d^2 eps %g: violation over all steps %.3g, at %zu recorded times %.3g",
                                 grid.cells_per_axis(), p.eps, pair.ordering_violation, pair.low.snapshots.size(),
                                 recorded);
    }

    static double bilinear(const ScalarField& f, double x, double y) {
        const GridSpec& g = f.grid();
        const double h = g.spacing();
        const int last = g.cells_per_axis() - 1;
        const double fx = (x + g.half_width()) / h, fy = (y + g.half_width()) / h;
        const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, last);
        const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, last);
        const double tx = fx - i, ty = fy - j;
        return (1 - ty) * ((1 - tx) * f.at(i, j) + tx * f.at(i + 1, j)) +
               ty * ((1 - tx) * f.at(i, j + 1) + tx * f.at(i + 1, j + 1));
    }

    void geometry_oracles(CriterionResult& r) {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int radius_mismatch = 0;
        double worst_minorant = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const GridSpec grid(1.0, 64 + 2 * (trial % 8));
            const double level = 0.2 + 0.6 * unit(rng);
            const double bias = unit(rng);
            ScalarField mask = ScalarField::from_function(grid, [&](double x, double y) {
                return unit(rng) * (1.0 + bias * (1.0 - x * x - y * y));
            });
            std::vector<double> inside, outside;
            const int n = grid.nodes_per_axis();
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    const double x = grid.coordinate(i), y = grid.coordinate(j);
                    (mask.at(i, j) > level ? inside : outside).push_back(std::sqrt(x * x + y * y));
                }
            }
            const BoundaryGeometry g = boundary_geometry(mask, level);
            if (inside.empty()) {
                radius_mismatch += !g.extinct;
            } else {
                const double half = 0.5 * grid.spacing();
                const double r_out = *std::max_element(inside.begin(), inside.end()) + half;
                const double r_in =
                    std::clamp(*std::min_element(outside.begin(), outside.end()) - half, 0.0, r_out);
                radius_mismatch += g.extinct || g.r_out != r_out || g.r_in != r_in;
            }

            double ax[3], ay[3], amp[3], phase[3];
            for (int m = 0; m < 3; ++m) {
                ax[m] = 6.0 * unit(rng) - 3.0;
                ay[m] = 6.0 * unit(rng) - 3.0;
                amp[m] = 0.1 * unit(rng);
                phase[m] = 2.0 * std::numbers::pi * unit(rng);
            }
            const GridSpec smooth_grid(1.0, 128);
            const ScalarField smooth = ScalarField::from_function(smooth_grid, [&](double x, double y) {
                double v = 1.0;
                for (int m = 0; m < 3; ++m) v += amp[m] * std::sin(ax[m] * x + ay[m] * y + phase[m]);
                return v;
            });
            const int samples = 64;
            const RadialField phi = radial_minorant(smooth, samples);
            for (int k = 0; k < samples; ++k) {
                const double rad = phi.radius(k);
                const int m = 4 * std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * rad / smooth_grid.spacing())));
                double lowest = std::numeric_limits<double>::infinity();
                for (int a = 0; a < m; ++a) {
                    const double theta = 2.0 * std::numbers::pi * a / m;
                    const double x = std::clamp(rad * std::cos(theta), -1.0, 1.0);
                    const double y = std::clamp(rad * std::sin(theta), -1.0, 1.0);
                    lowest = std::min(lowest, bilinear(smooth, x, y));
                }
                worst_minorant = std::max(worst_minorant, std::abs(phi[k] - lowest) / lowest);
            }
        }
        r.pass = radius_mismatch == 0 && worst_minorant <= 1e-3;
        r.detail = printf_string("50 fields: radius mismatches %d, worst minorant relative gap %.2e", radius_mismatch,
                                 worst_minorant);
    }

    void eps_limit(CriterionResult& r) {
        const RunConfig base = radial_config(0.02, 1.5, 768);
        const SweepResult s = sweep(base, SweepAxis::Eps, {0.04, 0.02, 0.01}, opt_.jobs);
        double T[3];
        for (int i = 0; i < 3; ++i) {
            const SweepOutcome& o = s.outcomes[static_cast<std::size_t>(i)];
            if (!o.ok) throw EstimationError("eps sweep child failed: " + o.error);
            tally_.max_increase = std::max(tally_.max_increase, o.result->max_increase);
            tally_.min_value = std::min(tally_.min_value, o.result->min_value);
            ++tally_.runs;
            T[i] = o.result->analysis.extinction->T_hat;
        }
        const double d1 = std::abs(T[1] - T[0]), d2 = std::abs(T[2] - T[1]);
        r.pass = d2 < d1;
        r.detail = printf_string("radial n=2 h 1/512: T_hat %.6f %.6f %.6f, differences %.3e then %.3e", T[0], T[1],
                                 T[2], d1, d2);
    }

    void determinism(CriterionResult& r) {
        RunConfig radial = radial_config(0.04, 1.5, 192);
        radial.dyadic = true;
        RunConfig flat;
        flat.cells = 128;
        flat.solver.eps = 0.04;
        flat.initial.perturbation_amplitude = 0.1;
        flat.dyadic = true;
        bool same_runs = true;
        for (const RunConfig& c : {radial, flat}) {
            const ExperimentResult a = execute_tracked(c);
            const ExperimentResult b = execute_tracked(c);
            same_runs &= series_csv(a) == series_csv(b) && geometry_csv(a) == geometry_csv(b) &&
                         analysis_json(a) == analysis_json(b) && a.snapshots == b.snapshots &&
                         a.radial_snapshots == b.radial_snapshots;
        }
        const std::vector<double> values{0.05, 0.04, 0.03};
        RunConfig base = radial_config(0.04, 1.5, 192);
        const std::string one = sweep_summary_csv(base, SweepAxis::Eps, sweep(base, SweepAxis::Eps, values, 1));
        const std::string three = sweep_summary_csv(base, SweepAxis::Eps, sweep(base, SweepAxis::Eps, values, 3));
        r.pass = same_runs && one == three;
        r.detail = printf_string("repeated runs identical %d, sweep summary 1 vs 3 workers identical %d", same_runs,
                                 one == three);
    }

    void maximum_principle(CriterionResult& r) {
        r.pass = tally_.runs > 0 && tally_.max_increase == 0.0 && tally_.min_value >= 0.0;
        r.detail = printf_string("%d runs: largest step increase of max u %.3g, smallest value %.3g", tally_.runs,
                                 tally_.max_increase, tally_.min_value);
    }

    const VerifyOptions& opt_;
    const bool full_;
    double budget_ = 0.0;
    std::vector<ProfileFixture> fixtures_;
    std::optional<ExperimentResult> flame_;
    MaxPrinciple tally_;
    VerifyReport report_;
};

}  // namespace

VerifyReport run_acceptance(const VerifyOptions& options) { return Suite(options).run(); }

}  // namespace flamefront
