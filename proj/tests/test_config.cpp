#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flamefront/config.hpp"
#include "flamefront/error.hpp"
#include "flamefront/experiment.hpp"

using namespace flamefront;
namespace fs = std::filesystem;

namespace {

const char* kRadial = R"(
# radial cap, quick
[grid]
geometry = radial
half_width = 1.5
cells = 192
[solver]
eps = 0.04
[initial]
dimension = 2
[record]
dyadic = true
dyadic_levels = 6
)";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("flamefront_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
    const RunConfig c = parse_config_string("");
    CHECK(c.geometry == GeometryKind::Cartesian);
    CHECK(c.half_width == 1.1);
    CHECK(c.cells == 256);
    CHECK(c.solver.eps == 0.02);
    CHECK(c.solver.cfl_safety == 0.9);
    CHECK(c.geometry_level() == doctest::Approx(0.002));
    CHECK(c.interior_alpha() == 0.1);
    CHECK(c.snapshots == SnapshotFormat::None);
}

TEST_CASE("values, comments and lists") {
    const RunConfig c = parse_config_string(R"(
[grid]
cells = 128   ; trailing comment
[solver]
eps = 2.5e-2
[kernel]
name = poly_bump
[initial]
perturbation_amplitude = 0.1
angular_mode = 12
[record]
times = 0.01, 0.02,0.5
[output]
dir = results
snapshots = binary
)");
    CHECK(c.cells == 128);
    CHECK(c.solver.eps == 0.025);
    CHECK(c.kernel == KernelShape::PolyBump);
    CHECK(c.initial.perturbation_amplitude == 0.1);
    CHECK(c.interior_alpha() == 0.1);
    CHECK(c.record_times == std::vector<double>{0.01, 0.02, 0.5});
    CHECK(c.out_dir == "results");
    CHECK(c.snapshots == SnapshotFormat::Binary);
}

TEST_CASE("strict parsing names the offending key") {
    auto message = [](const char* text) {
        try {
            parse_config_string(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("[grid]\ncelss = 3\n").find("celss") != std::string::npos);
    CHECK(message("[gird]\n").find("gird") != std::string::npos);
    CHECK(message("[solver]\neps = abc\n").find("solver.eps") != std::string::npos);
    CHECK(message("[solver]\neps = 0.1x\n").find("solver.eps") != std::string::npos);
    CHECK(message("[solver]\neps = 0.1\neps = 0.2\n").find("duplicate") != std::string::npos);
    CHECK(message("eps = 0.1\n").find("outside") != std::string::npos);
    CHECK(message("[grid]\ncells = 33\n").find("even") != std::string::npos);
    CHECK(message("[solver]\neps = -1\n").find("eps") != std::string::npos);
    CHECK(message("[grid]\ngeometry = spherical\n").find("grid.geometry") != std::string::npos);
    CHECK(message("[record]\nalpha = 1.5\n").find("alpha") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/flamefront.cfg"), ConfigError);
}

TEST_CASE("render round trips") {
    RunConfig c = parse_config_string(kRadial);
    c.record_times = {0.1, 1.0 / 3.0};
    c.level = 0.0037;
    const std::string text = render_config(c);
    const RunConfig back = parse_config_string(text);
    CHECK(render_config(back) == text);
    CHECK(back.record_times == c.record_times);
    CHECK(back.level == c.level);
    CHECK(back.geometry == GeometryKind::Radial);
}

TEST_CASE("set_config_value") {
    RunConfig c;
    set_config_value(c, "solver.eps", "0.01");
    CHECK(c.solver.eps == 0.01);
    set_config_value(c, "record.dyadic", "true");
    CHECK(c.dyadic);
    CHECK_THROWS_AS(set_config_value(c, "solver.nope", "1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "eps", "1"), ConfigError);
}

TEST_CASE("format_real is the shortest round trip") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(1.0) == "1");
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("radial experiment") {
    const RunConfig c = parse_config_string(kRadial);
    const ExperimentResult r = execute(c);
    CHECK(r.extinct);
    CHECK(r.max_increase == 0.0);
    REQUIRE(r.analysis.extinction);
    const double T = r.analysis.extinction->T_hat;
    CHECK(T > 0.15);
    CHECK(T < 0.25);
    REQUIRE(r.schedule);
    CHECK(r.schedule->levels() == 6);
    CHECK(r.analysis.sqrt_law);
    CHECK_FALSE(r.validation);
    CHECK_FALSE(r.analysis.flatness_fit);
    CHECK_FALSE(r.analysis.flatness_levels.empty());
    for (const auto& l : r.analysis.flatness_levels) {
        if (!l.geometry.extinct) CHECK(l.geometry.flatness <= 2 * r.spacing / l.geometry.r_in + 1e-15);
    }

    const auto json = nlohmann::json::parse(analysis_json(r));
    CHECK(json.contains("T_hat"));
    CHECK(json.contains("config"));
    CHECK(json["T_hat"].get<double>() == T);
    CHECK(validation_json(r).find("\"applicable\": false") != std::string::npos);

    const std::string csv = series_csv(r);
    CHECK(csv.rfind("# ", 0) == 0);
    CHECK(csv.find("t,max_u,r_in,r_out,flatness,mass\n") != std::string::npos);

    // determinism
    const ExperimentResult again = execute(c);
    CHECK(series_csv(again) == csv);
    CHECK(analysis_json(again) == analysis_json(r));
}

TEST_CASE("cartesian experiment writes every output") {
    RunConfig c = parse_config_string(R"(
[grid]
cells = 64
[solver]
eps = 0.04
[initial]
perturbation_amplitude = 0.1
[record]
times = 0.05
[output]
snapshots = text
)");
    const ExperimentResult r = execute(c);
    CHECK(r.extinct);
    REQUIRE(r.validation);
    CHECK(r.validation->hypotheses());
    const fs::path dir = scratch("cartesian");
    write_outputs(r, dir);
    for (const char* f : {"series.csv", "geometry.csv", "analysis.json", "validation.json"}) {
        CAPTURE(f);
        CHECK(fs::exists(dir / f));
        CHECK(slurp(dir / f).find("eps") != std::string::npos);
    }
    CHECK(fs::exists(dir / "snapshots" / "snap_000.txt"));
    const ScalarField s = load_snapshot((dir / "snapshots" / "snap_000.txt").string());
    CHECK(s == r.snapshots.front());
    fs::remove_all(dir);
}

TEST_CASE("non-extinct runs are flagged") {
    RunConfig c = parse_config_string("[grid]\ncells = 64\n[solver]\nmax_steps = 10\n");
    const ExperimentResult r = execute(c);
    CHECK_FALSE(r.extinct);
    CHECK(r.steps_taken == 10);
    CHECK_FALSE(r.analysis.extinction);
}

TEST_CASE("sweeps") {
    const RunConfig c = parse_config_string(kRadial);
    SUBCASE("summary does not depend on the worker count") {
        const std::vector<double> eps{0.08, 0.04, 0.06};
        const SweepResult one = sweep(c, SweepAxis::Eps, eps, 1);
        const SweepResult three = sweep(c, SweepAxis::Eps, eps, 3);
        CHECK(one.all_ok());
        REQUIRE(one.outcomes.size() == 3);
        CHECK(one.outcomes[0].value == 0.08);
        CHECK(one.outcomes[1].value == 0.04);
        CHECK(sweep_summary_csv(c, SweepAxis::Eps, one) == sweep_summary_csv(c, SweepAxis::Eps, three));
    }
    SUBCASE("single value matches a plain run") {
        const fs::path dir = scratch("sweep_single");
        const SweepResult s = sweep(c, SweepAxis::Eps, {0.04}, 2, dir);
        CHECK(s.all_ok());
        CHECK(fs::exists(dir / "summary.csv"));
        const ExperimentResult direct = execute(c);
        fs::path child;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_directory()) child = e.path();
        REQUIRE_FALSE(child.empty());
        CHECK(slurp(child / "series.csv") == series_csv(direct));
        fs::remove_all(dir);
    }
    SUBCASE("failing children are reported and the rest kept") {
        RunConfig limited = c;
        limited.solver.max_steps = 30000;
        limited.dyadic = false;
        const SweepResult s = sweep(limited, SweepAxis::Eps, {0.08, 0.002}, 2);
        CHECK_FALSE(s.all_ok());
        CHECK(s.outcomes[0].ok);
        CHECK(s.outcomes[0].result);
        CHECK_FALSE(s.outcomes[1].ok);
        CHECK_FALSE(s.outcomes[1].error.empty());
    }
    CHECK_THROWS_AS(sweep(c, SweepAxis::Eps, {}, 1), ConfigError);
    CHECK_THROWS_AS(sweep(c, SweepAxis::Eps, {0.04, -1.0}, 1), ConfigError);
    CHECK(sweep_axis_from_name("grid") == SweepAxis::Grid);
    CHECK_THROWS_AS(sweep_axis_from_name("time"), ConfigError);
}
