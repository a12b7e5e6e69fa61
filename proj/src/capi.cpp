#include "flamefront/flamefront.h"

#include <fstream>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "flamefront/acceptance.hpp"
#include "flamefront/config.hpp"
#include "flamefront/error.hpp"
#include "flamefront/experiment.hpp"
#include "flamefront/selfsim.hpp"

struct ff_profile {
    flamefront::SelfSimilarProfile profile;
    std::string json;
};

struct ff_config {
    flamefront::RunConfig config;
    std::string rendered;
};

struct ff_summary {
    bool extinct = false;
    double t_hat = 0.0;
    long steps = 0;
    std::string analysis;
};

namespace {

thread_local std::string last_error;

ff_status fail(ff_status status, const std::string& message) {
    last_error = message;
    return status;
}

/// Runs fn and turns any exception into a status code.
template <class Fn>
ff_status guarded(Fn&& fn) {
    using namespace flamefront;
    try {
        last_error.clear();
        return fn();
    } catch (const ConfigError& e) {
        return fail(FF_ERR_CONFIG, e.what());
    } catch (const SpecificationError& e) {
        return fail(FF_ERR_CONFIG, e.what());
    } catch (const PreconditionError& e) {
        return fail(FF_ERR_CONFIG, e.what());
    } catch (const ProfileNotFoundError& e) {
        return fail(FF_ERR_PROFILE, e.what());
    } catch (const FixtureIntegrityError& e) {
        return fail(FF_ERR_FIXTURE, e.what());
    } catch (const IoError& e) {
        return fail(FF_ERR_IO, e.what());
    } catch (const Error& e) {
        return fail(FF_ERR_NUMERIC, e.what());
    } catch (const std::bad_alloc&) {
        return fail(FF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FF_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FF_ERR_INTERNAL, "unknown failure");
    }
}

ff_status null_argument(const char* name) { return fail(FF_ERR_CONFIG, std::string("null argument: ") + name); }

}  // namespace

extern "C" {

const char* ff_last_error(void) { return last_error.c_str(); }

const char* ff_version(void) { return "0.1.0"; }

ff_status ff_profile_solve(int n, double tolerance, ff_profile** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        if (n < 1) throw flamefront::ConfigError("dimension must be at least 1");
        auto p = std::make_unique<ff_profile>();
        p->profile = flamefront::solve_profile(n, tolerance);
        nlohmann::ordered_json j = {{"n", n},
                                    {"R", p->profile.support_radius()},
                                    {"a1", p->profile.peak()},
                                    {"residual", p->profile.ode_residual_sup()}};
        p->json = j.dump();
        *out = p.release();
        return FF_OK;
    });
}

void ff_profile_free(ff_profile* profile) { delete profile; }

int ff_profile_dimension(const ff_profile* p) { return p ? p->profile.dimension() : 0; }
double ff_profile_radius(const ff_profile* p) { return p ? p->profile.support_radius() : 0.0; }
double ff_profile_peak(const ff_profile* p) { return p ? p->profile.peak() : 0.0; }
double ff_profile_residual(const ff_profile* p) { return p ? p->profile.ode_residual_sup() : 0.0; }
double ff_profile_eval(const ff_profile* p, double r) { return p && r >= 0.0 ? p->profile.value(r) : 0.0; }
const char* ff_profile_json(const ff_profile* p) { return p ? p->json.c_str() : ""; }

ff_status ff_profile_write_csv(const ff_profile* p, const char* path) {
    if (!p) return null_argument("profile");
    if (!path) return null_argument("path");
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw flamefront::IoError(std::string("cannot write ") + path);
        out << "r,f,df\n";
        for (const auto& s : p->profile.samples()) {
            out << flamefront::format_real(s.r) << ',' << flamefront::format_real(s.f) << ','
                << flamefront::format_real(s.df) << '\n';
        }
        if (!out) throw flamefront::IoError(std::string("write failed for ") + path);
        return FF_OK;
    });
}

ff_status ff_config_load(const char* path, ff_config** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        auto c = std::make_unique<ff_config>();
        c->config = flamefront::load_config(path);
        *out = c.release();
        return FF_OK;
    });
}

ff_status ff_config_parse(const char* text, ff_config** out) {
    if (!text) return null_argument("text");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        auto c = std::make_unique<ff_config>();
        c->config = flamefront::parse_config_string(text);
        *out = c.release();
        return FF_OK;
    });
}

ff_status ff_config_set(ff_config* config, const char* key, const char* value) {
    if (!config) return null_argument("config");
    if (!key) return null_argument("key");
    if (!value) return null_argument("value");
    return guarded([&] {
        flamefront::RunConfig updated = config->config;
        flamefront::set_config_value(updated, key, value);
        updated.check();
        config->config = std::move(updated);
        return FF_OK;
    });
}

const char* ff_config_render(ff_config* config) {
    if (!config) return "";
    config->rendered = flamefront::render_config(config->config);
    return config->rendered.c_str();
}

void ff_config_free(ff_config* config) { delete config; }

ff_status ff_run(const ff_config* config, const char* out_dir, ff_summary** out) {
    if (!config) return null_argument("config");
    if (out) *out = nullptr;
    return guarded([&] {
        const flamefront::ExperimentResult r = flamefront::execute(config->config);
        flamefront::write_outputs(r, out_dir ? std::string(out_dir) : config->config.out_dir);
        if (out) {
            auto s = std::make_unique<ff_summary>();
            s->extinct = r.extinct;
            s->t_hat = r.analysis.extinction ? r.analysis.extinction->T_hat : 0.0;
            s->steps = r.steps_taken;
            s->analysis = flamefront::analysis_json(r);
            *out = s.release();
        }
        if (!r.extinct) return fail(FF_ERR_NOT_EXTINCT, "run reached max_steps before extinction");
        return FF_OK;
    });
}

void ff_summary_free(ff_summary* s) { delete s; }
int ff_summary_extinct(const ff_summary* s) { return s && s->extinct ? 1 : 0; }
double ff_summary_t_hat(const ff_summary* s) { return s ? s->t_hat : 0.0; }
long ff_summary_steps(const ff_summary* s) { return s ? s->steps : 0; }
const char* ff_summary_analysis_json(const ff_summary* s) { return s ? s->analysis.c_str() : ""; }

ff_status ff_sweep(const ff_config* config, const char* axis, const double* values, size_t count, const char* out_dir,
                   int jobs) {
    if (!config) return null_argument("config");
    if (!axis) return null_argument("axis");
    if (count > 0 && !values) return null_argument("values");
    return guarded([&] {
        if (count == 0) throw flamefront::ConfigError("sweep needs at least one value");
        const std::vector<double> v(values, values + count);
        const std::string dir = out_dir ? out_dir : config->config.out_dir;
        const auto result = flamefront::sweep(config->config, flamefront::sweep_axis_from_name(axis), v,
                                              jobs > 0 ? jobs : flamefront::default_jobs(), dir);
        if (!result.all_ok()) {
            std::string msg = "sweep children failed:";
            for (const auto& o : result.outcomes) {
                if (!o.ok) msg += " " + flamefront::format_real(o.value) + " (" + o.error + ")";
            }
            return fail(FF_ERR_SWEEP, msg);
        }
        return FF_OK;
    });
}

ff_status ff_verify(const char* level, const char* fixtures_path, int jobs, ff_line_callback callback, void* user) {
    if (!level) return null_argument("level");
    if (!fixtures_path) return null_argument("fixtures_path");
    return guarded([&] {
        flamefront::VerifyOptions opt;
        opt.level = flamefront::verify_level_from_name(level);
        opt.fixtures = fixtures_path;
        opt.jobs = jobs > 0 ? jobs : flamefront::default_jobs();
        if (callback) {
            opt.on_result = [&](const flamefront::CriterionResult& r) {
                callback(flamefront::format_criterion(r).c_str(), user);
            };
        }
        const auto report = flamefront::run_acceptance(opt);
        if (!report.all_pass()) {
            int failed = 0;
            for (const auto& r : report.results) failed += !r.pass;
            return fail(FF_ERR_VERIFY, std::to_string(failed) + " acceptance criteria failed");
        }
        return FF_OK;
    });
}

ff_status ff_fixtures_check(const char* fixtures_path) {
    if (!fixtures_path) return null_argument("fixtures_path");
    return guarded([&] {
        flamefront::load_profile_fixtures(fixtures_path);
        return FF_OK;
    });
}

}  // extern "C"
