#include "flamefront/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "flamefront/error.hpp"
#include "flamefront/radial.hpp"
#include "flamefront/selfsim.hpp"
#include "flamefront/solver.hpp"

namespace flamefront {

namespace {

using json = nlohmann::ordered_json;

constexpr int flatness_k_min = 2;
constexpr double sqrt_law_lo = 0.5;
constexpr double sqrt_law_hi = 0.95;

SeriesRow row_from(const SeriesSample& s, const BoundaryGeometry& g) {
    return {s.t, s.max_u, g.r_in, g.r_out, g.flatness, s.mass};
}

ScalarField initial_cartesian(const RunConfig& c, const GridSpec& grid, const SelfSimilarProfile* profile) {
    if (c.initial_kind == InitialKind::Cap) return build(c.initial, grid);
    if (!(grid.half_width() > profile->support_radius() * std::sqrt(c.self_similar_T))) {
        throw ConfigError("grid.half_width must exceed the self-similar support radius");
    }
    return ScalarField::from_function(grid, [&](double x, double y) {
        return self_similar_U_radius(*profile, std::hypot(x, y), 0.0, c.self_similar_T);
    });
}

RadialField initial_radial(const RunConfig& c, const SelfSimilarProfile* profile) {
    const int n = c.initial.dimension;
    if (c.initial_kind == InitialKind::Cap) {
        try {
            return build_radial(c.initial, n, c.half_width, c.cells);
        } catch (const SpecificationError& e) {
            throw ConfigError(e.what());
        }
    }
    if (!(c.half_width > profile->support_radius() * std::sqrt(c.self_similar_T))) {
        throw ConfigError("grid.half_width must exceed the self-similar support radius");
    }
    return RadialField::from_function(n, c.half_width, c.cells, [&](double r) {
        return self_similar_U_radius(*profile, r, 0.0, c.self_similar_T);
    });
}

template <class Field>
void common_analysis(ExperimentResult& out, const BasicRunRecord<Field>& rec, const SelfSimilarProfile& profile,
                     double spacing) {
    ExperimentAnalysis& a = out.analysis;
    a.extinction = rec.extinction;
    if (a.extinction && a.extinction->T_hat > 0.0) {
        try {
            a.sqrt_law = sqrt_law_ratio(rec.series, a.extinction->T_hat, sqrt_law_lo, sqrt_law_hi);
        } catch (const ParameterError&) {
        }
        for (const Field& snap : rec.snapshots) {
            if (snap.time() < a.extinction->T_hat) {
                a.self_similar_errors.push_back(
                    {snap.time(), self_similar_error(snap, snap.time(), a.extinction->T_hat, profile)});
            }
        }
    }
    a.gradient_sup = gradient_bound_check(rec, out.config.initial.M);
    for (const Field& snap : rec.snapshots) out.geometry.push_back(boundary_geometry(snap, out.config.geometry_level()));
    if (out.schedule && !out.geometry.empty()) {
        a.flatness_levels = dyadic_flatness_levels(out.geometry, *out.schedule, spacing);
        try {
            a.flatness_fit = flatness_decay_fit(out.geometry, *out.schedule, spacing, flatness_k_min);
        } catch (const Error& e) {
            a.flatness_fit_error = e.what();
        }
    }
    out.extinct = rec.extinct;
    out.steps_taken = rec.steps_taken;
    out.dt = rec.dt;
    out.spacing = spacing;
    out.max_increase = rec.max_increase;
    out.min_value = rec.min_value;
}

std::vector<double> merged_times(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out = a;
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Runs once, or twice with dyadic snapshots, and hands back the final record.
template <class Field, class Runner>
BasicRunRecord<Field> two_pass(ExperimentResult& out, Runner&& runner) {
    const RunConfig& c = out.config;
    SolverParams p = c.solver;
    p.record_times = c.record_times;
    if (!c.dyadic) return runner(p);
    SolverParams first = p;
    first.record_times.clear();
    const auto probe = runner(first);
    if (!probe.extinction) return probe;
    out.schedule = dyadic_times(probe.extinction->T_hat, c.dyadic_levels);
    p.record_times = merged_times(c.record_times, out.schedule->times);
    return runner(p);
}

void execute_cartesian(ExperimentResult& out, const SelfSimilarProfile& profile) {
    const RunConfig& c = out.config;
    const GridSpec grid(c.half_width, c.cells);
    ScalarField u0;
    try {
        u0 = initial_cartesian(c, grid, &profile);
    } catch (const SpecificationError& e) {
        throw ConfigError(e.what());
    }
    if (c.initial_kind == InitialKind::Cap) out.validation = validate(u0, c.initial);
    const BetaKernel kernel(c.kernel);
    const double level = c.geometry_level();
    const RunRecord rec = two_pass<ScalarField>(out, [&](const SolverParams& p) {
        out.series.clear();
        return run(u0, p, kernel, [&](const ScalarField& f, const SeriesSample& s) {
            out.series.push_back(row_from(s, boundary_geometry(f, level)));
        });
    });
    common_analysis(out, rec, profile, grid.spacing());
    if (out.schedule) {
        const double alpha = c.interior_alpha();
        for (const DyadicFlatness& lv : out.analysis.flatness_levels) {
            InteriorRatioEntry e{lv.k, lv.t, std::nullopt, {}};
            const auto snap = std::min_element(rec.snapshots.begin(), rec.snapshots.end(),
                                               [&](const ScalarField& a, const ScalarField& b) {
                                                   return std::abs(a.time() - lv.t) < std::abs(b.time() - lv.t);
                                               });
            if (lv.geometry.extinct) {
                e.note = "extinct";
            } else if (lv.geometry.r_in < 8.0 * grid.spacing()) {
                e.note = "unresolved";
            } else {
                try {
                    const RadialField phi = radial_minorant(*snap, c.cells / 2);
                    e.ratio = interior_ratio(*snap, phi, lv.geometry.r_in, alpha, level);
                } catch (const InsufficientResolutionError& err) {
                    e.note = err.what();
                }
            }
            out.analysis.interior_ratios.push_back(std::move(e));
        }
    }
    out.snapshots = rec.snapshots;
}

void execute_radial(ExperimentResult& out, const SelfSimilarProfile& profile) {
    const RunConfig& c = out.config;
    const RadialField u0 = initial_radial(c, &profile);
    const BetaKernel kernel(c.kernel);
    const double level = c.geometry_level();
    const RadialRunRecord rec = two_pass<RadialField>(out, [&](const SolverParams& p) {
        out.series.clear();
        return radial_run(u0, p, kernel, [&](const RadialField& f, const SeriesSample& s) {
            out.series.push_back(row_from(s, boundary_geometry(f, level)));
        });
    });
    common_analysis(out, rec, profile, u0.spacing());
    out.radial_snapshots = rec.snapshots;
}

std::string comment_block(const RunConfig& c) {
    std::string out = "# flamefront run\n";
    std::istringstream in(render_config(c));
    for (std::string line; std::getline(in, line);) out += "# " + line + "\n";
    return out;
}

json config_json(const RunConfig& c) {
    json j = json::object();
    std::istringstream in(render_config(c));
    std::string section;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        if (line.front() == '[') {
            section = line.substr(1, line.size() - 2);
            j[section] = json::object();
            continue;
        }
        const auto eq = line.find(" = ");
        j[section][line.substr(0, eq)] = line.substr(eq + 3);
    }
    return j;
}

json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json geometry_json(const BoundaryGeometry& g) {
    return {{"t", real(g.time)},       {"r_in", real(g.r_in)},   {"r_out", real(g.r_out)},
            {"flatness", real(g.flatness)}, {"level", real(g.level)}, {"extinct", g.extinct}};
}

json check_json(const CheckResult& c) {
    return {{"measured", real(c.measured)}, {"bound", real(c.bound)}, {"pass", c.pass}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

ExperimentResult execute(const RunConfig& config) {
    config.check();
    ExperimentResult out;
    out.config = config;
    const int n = config.geometry == GeometryKind::Cartesian ? 2 : config.initial.dimension;
    const SelfSimilarProfile profile = solve_profile(n, 1e-12);
    if (config.geometry == GeometryKind::Cartesian) execute_cartesian(out, profile);
    else execute_radial(out, profile);
    return out;
}

std::string series_csv(const ExperimentResult& r) {
    std::string out = comment_block(r.config);
    out += "t,max_u,r_in,r_out,flatness,mass\n";
    for (const SeriesRow& s : r.series) {
        out += format_real(s.t) + "," + format_real(s.max_u) + "," + format_real(s.r_in) + "," + format_real(s.r_out) +
               "," + format_real(s.flatness) + "," + format_real(s.mass) + "\n";
    }
    return out;
}

std::string geometry_csv(const ExperimentResult& r) {
    std::string out = comment_block(r.config);
    out += "t,r_in,r_out,flatness,level,extinct\n";
    for (const BoundaryGeometry& g : r.geometry) {
        out += format_real(g.time) + "," + format_real(g.r_in) + "," + format_real(g.r_out) + "," +
               format_real(g.flatness) + "," + format_real(g.level) + "," + (g.extinct ? "1" : "0") + "\n";
    }
    return out;
}

std::string analysis_json(const ExperimentResult& r) {
    const ExperimentAnalysis& a = r.analysis;
    json j;
    j["config"] = config_json(r.config);
    j["extinct"] = r.extinct;
    j["steps"] = r.steps_taken;
    j["dt"] = real(r.dt);
    j["max_increase"] = real(r.max_increase);
    if (a.extinction) {
        j["T_hat"] = real(a.extinction->T_hat);
        j["method"] = extinction_method_name(a.extinction->method);
        j["fit_window"] = {real(a.extinction->fit_lo), real(a.extinction->fit_hi)};
        j["fit_residual"] = real(a.extinction->fit_residual);
        j["fit_samples"] = a.extinction->fit_samples;
        j["fit_root"] = real(a.extinction->fit_root);
    } else {
        j["T_hat"] = nullptr;
        j["method"] = nullptr;
    }
    if (a.sqrt_law) {
        j["sqrt_law"] = {{"window", {sqrt_law_lo, sqrt_law_hi}},
                         {"min_ratio", real(a.sqrt_law->min_ratio)},
                         {"max_ratio", real(a.sqrt_law->max_ratio)},
                         {"used", a.sqrt_law->used},
                         {"excluded", a.sqrt_law->excluded}};
    } else {
        j["sqrt_law"] = nullptr;
    }
    if (r.schedule) {
        json levels = json::array();
        for (const DyadicFlatness& lv : a.flatness_levels) {
            json g = geometry_json(lv.geometry);
            g["k"] = lv.k;
            g["t_k"] = real(lv.t);
            g["resolved"] = lv.resolved;
            g["floor"] = lv.geometry.r_in > 0.0 ? real(2.0 * r.spacing / lv.geometry.r_in) : json(nullptr);
            levels.push_back(std::move(g));
        }
        json fit = {{"k_min", flatness_k_min}, {"levels", levels}};
        if (a.flatness_fit) {
            fit["h_hat"] = real(a.flatness_fit->h_hat);
            fit["log_C"] = real(a.flatness_fit->log_C);
            fit["residual"] = real(a.flatness_fit->log_fit_residual);
            fit["resolved_levels"] = a.flatness_fit->resolved_levels;
        } else {
            fit["h_hat"] = nullptr;
            fit["error"] = a.flatness_fit_error;
        }
        j["flatness_fit"] = fit;
        j["dyadic_times"] = r.schedule->times;
    } else {
        j["flatness_fit"] = nullptr;
    }
    json ir = json::array();
    for (const InteriorRatioEntry& e : a.interior_ratios) {
        json x = {{"k", e.k}, {"t", real(e.t)}};
        if (e.ratio) {
            x["ratio"] = real(e.ratio->ratio);
            x["inner_radius"] = real(e.ratio->inner_radius);
            x["cells"] = e.ratio->cells;
            x["excluded"] = e.ratio->excluded;
        } else {
            x["ratio"] = nullptr;
            x["note"] = e.note;
        }
        ir.push_back(std::move(x));
    }
    j["interior_ratios"] = ir;
    json sse = json::array();
    for (const SelfSimilarErrorEntry& e : a.self_similar_errors) sse.push_back({{"t", real(e.t)}, {"error", real(e.error)}});
    j["self_similar_errors"] = sse;
    j["gradient_sup"] = real(a.gradient_sup);
    return j.dump(2) + "\n";
}

std::string validation_json(const ExperimentResult& r) {
    json j;
    j["config"] = config_json(r.config);
    if (!r.validation) {
        j["applicable"] = false;
        return j.dump(2) + "\n";
    }
    const ValidationReport& v = *r.validation;
    j["applicable"] = true;
    j["support"] = check_json(v.support);
    j["gradient"] = check_json(v.gradient);
    j["peak"] = check_json(v.peak);
    j["laplacian"] = check_json(v.laplacian);
    if (v.laplacian_violation) j["laplacian_violation"] = {v.laplacian_violation->first, v.laplacian_violation->second};
    j["boundary_gradient"] = check_json(v.boundary_gradient);
    j["shrinking_support"] = v.shrinking_support();
    j["hypotheses"] = v.hypotheses();
    j["period_condition"] = v.period_condition;
    j["angular_period"] = real(v.angular_period);
    return j.dump(2) + "\n";
}

void write_outputs(const ExperimentResult& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    write_file(dir / "series.csv", series_csv(r));
    write_file(dir / "geometry.csv", geometry_csv(r));
    write_file(dir / "analysis.json", analysis_json(r));
    write_file(dir / "validation.json", validation_json(r));
    if (r.config.snapshots == SnapshotFormat::None) return;
    const std::filesystem::path snaps = dir / "snapshots";
    std::filesystem::create_directories(snaps, ec);
    if (ec) throw IoError("cannot create " + snaps.string() + ": " + ec.message());
    const bool binary = r.config.snapshots == SnapshotFormat::Binary;
    char name[64];
    for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
        std::snprintf(name, sizeof name, "snap_%03zu.%s", i, binary ? "bin" : "txt");
        save_snapshot(r.snapshots[i], (snaps / name).string(), binary);
    }
    for (std::size_t i = 0; i < r.radial_snapshots.size(); ++i) {
        std::snprintf(name, sizeof name, "radial_%03zu.txt", i);
        std::ofstream out(snaps / name);
        write_radial_snapshot(r.radial_snapshots[i], out);
        if (!out) throw IoError("cannot write " + (snaps / name).string());
    }
}

SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "eps") return SweepAxis::Eps;
    if (name == "alpha") return SweepAxis::Alpha;
    if (name == "grid") return SweepAxis::Grid;
    throw ConfigError("unknown sweep axis " + name + " (expected eps, alpha or grid)");
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Alpha: return "alpha";
        case SweepAxis::Grid: return "grid";
        default: return "eps";
    }
}

bool SweepResult::all_ok() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const SweepOutcome& o) { return o.ok; });
}

namespace {

RunConfig with_axis(const RunConfig& base, SweepAxis axis, double value) {
    RunConfig c = base;
    switch (axis) {
        case SweepAxis::Eps:
            c.solver.eps = value;
            break;
        case SweepAxis::Alpha:
            c.initial.perturbation_amplitude = value;
            break;
        case SweepAxis::Grid:
            if (value != std::floor(value) || value < 16 || value > 1e6) {
                throw ConfigError("grid sweep values must be integers >= 16");
            }
            c.cells = static_cast<int>(value);
            break;
    }
    return c;
}

}  // namespace

SweepResult sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values, int jobs,
                  const std::filesystem::path& out_dir) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<RunConfig> configs;
    std::vector<std::filesystem::path> dirs;
    for (double v : values) {
        RunConfig c = with_axis(base, axis, v);
        c.check();
        configs.push_back(std::move(c));
        if (!out_dir.empty()) dirs.push_back(out_dir / (sweep_axis_name(axis) + "_" + format_real(v)));
    }
    SweepResult result;
    result.outcomes.resize(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            SweepOutcome& o = result.outcomes[i];
            o.value = values[i];
            try {
                ExperimentResult r = execute(configs[i]);
                if (!out_dir.empty()) write_outputs(r, dirs[i]);
                o.ok = r.extinct;
                if (!r.extinct) o.error = "not extinct within max_steps";
                o.result = std::move(r);
            } catch (const std::exception& e) {
                o.error = e.what();
            }
        }
    };
    const int n = std::clamp(jobs, 1, static_cast<int>(configs.size()));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < n; ++t) pool.emplace_back(worker);
        worker();
    }
    if (!out_dir.empty()) write_file(out_dir / "summary.csv", sweep_summary_csv(base, axis, result));
    return result;
}

std::string sweep_summary_csv(const RunConfig& base, SweepAxis axis, const SweepResult& result) {
    std::string out = comment_block(base);
    out += "# sweep axis = " + sweep_axis_name(axis) + "\n";
    out += sweep_axis_name(axis) + ",ok,extinct,T_hat,method,steps,sqrt_min,sqrt_max,h_hat,error\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    for (const SweepOutcome& o : result.outcomes) {
        std::optional<double> T, smin, smax, hh;
        std::string method, steps, extinct = "0";
        if (o.result) {
            const ExperimentAnalysis& a = o.result->analysis;
            if (a.extinction) {
                T = a.extinction->T_hat;
                method = extinction_method_name(a.extinction->method);
            }
            if (a.sqrt_law) {
                smin = a.sqrt_law->min_ratio;
                smax = a.sqrt_law->max_ratio;
            }
            if (a.flatness_fit) hh = a.flatness_fit->h_hat;
            steps = std::to_string(o.result->steps_taken);
            extinct = o.result->extinct ? "1" : "0";
        }
        std::string err = o.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out += format_real(o.value) + "," + (o.ok ? "1" : "0") + "," + extinct + "," + opt(T) + "," + method + "," +
               steps + "," + opt(smin) + "," + opt(smax) + "," + opt(hh) + "," + err + "\n";
    }
    return out;
}

int default_jobs() {
    if (const char* env = std::getenv("FLAMEFRONT_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace flamefront
