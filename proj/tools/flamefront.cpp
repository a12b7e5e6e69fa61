#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flamefront/flamefront.h"

#ifndef FLAMEFRONT_FIXTURES
#define FLAMEFRONT_FIXTURES "tests/fixtures/profiles.json"
#endif

namespace {

int report(ff_status status) {
    if (status != FF_OK) std::cerr << "flamefront: " << ff_last_error() << "\n";
    return status <= FF_ERR_FIXTURE ? static_cast<int>(status) : 1;
}

int jobs_or_default(int jobs) {
    if (jobs > 0) return jobs;
    return 0;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
    }
    return out;
}

int cmd_profile(const std::vector<int>& dims, double tolerance, const std::string& out_path,
                const std::string& csv_dir) {
    if (dims.empty()) {
        std::cerr << "flamefront profile: give at least one dimension with --n\n";
        return 1;
    }
    std::string doc = "[\n";
    for (std::size_t i = 0; i < dims.size(); ++i) {
        ff_profile* p = nullptr;
        const ff_status st = ff_profile_solve(dims[i], tolerance, &p);
        if (st != FF_OK) return report(st);
        doc += "  " + std::string(ff_profile_json(p)) + (i + 1 < dims.size() ? ",\n" : "\n");
        if (!csv_dir.empty()) {
            const std::string path = csv_dir + "/profile_n" + std::to_string(dims[i]) + ".csv";
            const ff_status cs = ff_profile_write_csv(p, path.c_str());
            ff_profile_free(p);
            if (cs != FF_OK) return report(cs);
        } else {
            ff_profile_free(p);
        }
    }
    doc += "]\n";
    if (out_path.empty()) {
        std::cout << doc;
        return 0;
    }
    std::ofstream out(out_path);
    out << doc;
    if (!out) {
        std::cerr << "flamefront profile: cannot write " << out_path << "\n";
        return 1;
    }
    return 0;
}

ff_status load_with_overrides(const std::string& path, const std::vector<std::string>& sets, ff_config** out) {
    const ff_status st = ff_config_load(path.c_str(), out);
    if (st != FF_OK) return st;
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        const std::string key = kv.substr(0, eq);
        const std::string value = eq == std::string::npos ? "" : kv.substr(eq + 1);
        const ff_status s = ff_config_set(*out, key.c_str(), value.c_str());
        if (s != FF_OK) {
            ff_config_free(*out);
            *out = nullptr;
            return s;
        }
    }
    return FF_OK;
}

int cmd_run(const std::string& config, const std::vector<std::string>& sets, const std::string& out_dir) {
    ff_config* c = nullptr;
    ff_status st = load_with_overrides(config, sets, &c);
    if (st != FF_OK) return report(st);
    ff_summary* s = nullptr;
    st = ff_run(c, out_dir.empty() ? nullptr : out_dir.c_str(), &s);
    if (s) {
        std::printf("extinct=%d T_hat=%.10g steps=%ld\n", ff_summary_extinct(s), ff_summary_t_hat(s),
                    ff_summary_steps(s));
        ff_summary_free(s);
    }
    ff_config_free(c);
    return report(st);
}

int cmd_sweep(const std::string& config, const std::vector<std::string>& sets, const std::string& axis,
              const std::string& values_text, const std::string& out_dir, int jobs) {
    std::vector<double> values;
    try {
        values = parse_values(values_text);
    } catch (const std::exception&) {
        std::cerr << "flamefront sweep: --values must be a comma-separated list of numbers\n";
        return 1;
    }
    if (values.empty()) {
        std::cerr << "flamefront sweep: --values is empty\n";
        return 1;
    }
    ff_config* c = nullptr;
    ff_status st = load_with_overrides(config, sets, &c);
    if (st != FF_OK) return report(st);
    st = ff_sweep(c, axis.c_str(), values.data(), values.size(), out_dir.empty() ? nullptr : out_dir.c_str(),
                  jobs_or_default(jobs));
    ff_config_free(c);
    return report(st);
}

void print_line(const char* line, void*) {
    std::printf("%s\n", line);
    std::fflush(stdout);
}

int cmd_verify(const std::string& level, const std::string& fixtures, int jobs) {
    const ff_status st = ff_verify(level.c_str(), fixtures.c_str(), jobs_or_default(jobs), print_line, nullptr);
    if (st == FF_OK) std::printf("all acceptance criteria passed\n");
    return report(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regularized flame-front laboratory"};
    app.require_subcommand(1);

    std::vector<int> dims;
    double tolerance = 1e-12;
    std::string out, csv_dir, config, axis, values, level = "quick";
    std::vector<std::string> sets;
    int jobs = 0;
    const char* env_fixtures = std::getenv("FLAMEFRONT_FIXTURES");
    std::string fixtures = env_fixtures ? env_fixtures : FLAMEFRONT_FIXTURES;

    auto* profile = app.add_subcommand("profile", "Solve self-similar profiles and print {n, R, a1, residual}");
    profile->add_option("--n", dims, "Dimensions")->delimiter(',');
    profile->add_option("--tolerance", tolerance, "Root tolerance")->capture_default_str();
    profile->add_option("--out", out, "JSON output file (default stdout)");
    profile->add_option("--csv", csv_dir, "Directory for profile_n<n>.csv tables");

    auto* run = app.add_subcommand("run", "Run one simulation");
    run->add_option("--config", config, "Config file")->required();
    run->add_option("--set", sets, "Override, section.key=value");
    run->add_option("--out", out, "Output directory (default output.dir)");

    auto* sweep = app.add_subcommand("sweep", "Run one simulation per value of an axis");
    sweep->add_option("--config", config, "Config file")->required();
    sweep->add_option("--set", sets, "Override, section.key=value");
    sweep->add_option("--axis", axis, "eps, alpha or grid")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required();
    sweep->add_option("--out", out, "Output directory (default output.dir)");
    sweep->add_option("--jobs", jobs, "Worker threads (default FLAMEFRONT_JOBS or all cores)");

    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--level", level, "quick or full")->capture_default_str();
    verify->add_option("--fixtures", fixtures, "Profile fixtures file")->capture_default_str();
    verify->add_option("--jobs", jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (*profile) return cmd_profile(dims, tolerance, out, csv_dir);
    if (*run) return cmd_run(config, sets, out);
    if (*sweep) return cmd_sweep(config, sets, axis, values, out, jobs);
    return cmd_verify(level, fixtures, jobs);
}
