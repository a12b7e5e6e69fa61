#include "flamefront/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "flamefront/error.hpp"

namespace flamefront {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* what) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key " + std::string(key) + ": " + what);
}

double parse_real(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size()) bad_value(key, value, "expected a real number");
    return out;
}

long parse_integer(std::string_view key, std::string_view value) {
    long out = 0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || end != value.data() + value.size()) bad_value(key, value, "expected an integer");
    return out;
}

int parse_int(std::string_view key, std::string_view value) {
    const long v = parse_integer(key, value);
    if (v < -2'000'000'000L || v > 2'000'000'000L) bad_value(key, value, "integer out of range");
    return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value, "expected true or false");
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    if (trim(value).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = value.find(',', start);
        const auto item = trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
        out.push_back(parse_real(key, item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string geometry_kind_name(GeometryKind kind) { return kind == GeometryKind::Radial ? "radial" : "cartesian"; }

std::string initial_kind_name(InitialKind kind) { return kind == InitialKind::SelfSimilar ? "self_similar" : "cap"; }

std::string snapshot_format_name(SnapshotFormat format) {
    switch (format) {
        case SnapshotFormat::Text: return "text";
        case SnapshotFormat::Binary: return "binary";
        default: return "none";
    }
}

double RunConfig::interior_alpha() const {
    if (alpha) return *alpha;
    return initial.perturbation_amplitude > 0.0 && initial.perturbation_amplitude < 1.0
               ? initial.perturbation_amplitude
               : 0.1;
}

void RunConfig::check() const {
    if (!(half_width > 0.0)) throw ConfigError("grid.half_width must be positive");
    if (cells < 16) throw ConfigError("grid.cells must be at least 16");
    if (geometry == GeometryKind::Cartesian && cells % 2 != 0) throw ConfigError("grid.cells must be even");
    if (!(solver.eps > 0.0)) throw ConfigError("solver.eps must be positive");
    if (!(solver.cfl_safety > 0.0 && solver.cfl_safety <= 1.0)) throw ConfigError("solver.cfl_safety must lie in (0, 1]");
    if (solver.extinction_threshold && !(*solver.extinction_threshold > 0.0)) {
        throw ConfigError("solver.extinction_threshold must be positive");
    }
    if (solver.max_steps < 0) throw ConfigError("solver.max_steps must be nonnegative");
    if (solver.series_stride < 1) throw ConfigError("solver.series_stride must be at least 1");
    if (geometry == GeometryKind::Cartesian && initial.dimension != 2) {
        throw ConfigError("initial.dimension must be 2 for cartesian geometry");
    }
    if (initial.dimension < 1 || initial.dimension > 6) throw ConfigError("initial.dimension must lie in 1..6");
    if (!(self_similar_T > 0.0)) throw ConfigError("initial.T must be positive");
    if (dyadic_levels < 1 || dyadic_levels > 52) throw ConfigError("record.dyadic_levels must lie in 1..52");
    if (level && !(*level > 0.0)) throw ConfigError("record.level must be positive");
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw ConfigError("record.alpha must lie in (0, 1)");
    if (out_dir.empty()) throw ConfigError("output.dir must not be empty");
}

void set_config_value(RunConfig& c, std::string_view key, std::string_view raw) {
    const std::string_view v = trim(raw);
    if (key == "grid.geometry") {
        if (v == "cartesian") c.geometry = GeometryKind::Cartesian;
        else if (v == "radial") c.geometry = GeometryKind::Radial;
        else bad_value(key, v, "expected cartesian or radial");
    } else if (key == "grid.half_width") {
        c.half_width = parse_real(key, v);
    } else if (key == "grid.cells") {
        c.cells = parse_int(key, v);
    } else if (key == "solver.eps") {
        c.solver.eps = parse_real(key, v);
    } else if (key == "solver.cfl_safety") {
        c.solver.cfl_safety = parse_real(key, v);
    } else if (key == "solver.extinction_threshold") {
        c.solver.extinction_threshold = parse_real(key, v);
    } else if (key == "solver.max_steps") {
        c.solver.max_steps = parse_integer(key, v);
    } else if (key == "solver.series_stride") {
        c.solver.series_stride = parse_int(key, v);
    } else if (key == "kernel.name") {
        try {
            c.kernel = kernel_shape_from_name(v);
        } catch (const ConfigError&) {
            bad_value(key, v, "expected smooth_bump or poly_bump");
        }
    } else if (key == "initial.kind") {
        if (v == "cap") c.initial_kind = InitialKind::Cap;
        else if (v == "self_similar") c.initial_kind = InitialKind::SelfSimilar;
        else bad_value(key, v, "expected cap or self_similar");
    } else if (key == "initial.dimension") {
        c.initial.dimension = parse_int(key, v);
    } else if (key == "initial.cap_amplitude") {
        c.initial.cap_amplitude = parse_real(key, v);
    } else if (key == "initial.perturbation_amplitude") {
        c.initial.perturbation_amplitude = parse_real(key, v);
    } else if (key == "initial.angular_mode") {
        c.initial.angular_mode = parse_int(key, v);
    } else if (key == "initial.envelope_lo") {
        c.initial.envelope_lo = parse_real(key, v);
    } else if (key == "initial.envelope_hi") {
        c.initial.envelope_hi = parse_real(key, v);
    } else if (key == "initial.M") {
        c.initial.M = parse_real(key, v);
    } else if (key == "initial.T") {
        c.self_similar_T = parse_real(key, v);
    } else if (key == "record.times") {
        c.record_times = parse_list(key, v);
    } else if (key == "record.dyadic") {
        c.dyadic = parse_bool(key, v);
    } else if (key == "record.dyadic_levels") {
        c.dyadic_levels = parse_int(key, v);
    } else if (key == "record.level") {
        c.level = parse_real(key, v);
    } else if (key == "record.alpha") {
        c.alpha = parse_real(key, v);
    } else if (key == "output.dir") {
        c.out_dir = std::string(v);
    } else if (key == "output.snapshots") {
        if (v == "none") c.snapshots = SnapshotFormat::None;
        else if (v == "text") c.snapshots = SnapshotFormat::Text;
        else if (v == "binary") c.snapshots = SnapshotFormat::Binary;
        else bad_value(key, v, "expected none, text or binary");
    } else {
        throw ConfigError("unknown key " + std::string(key));
    }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
    RunConfig c;
    std::string section;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto where = source + ":" + std::to_string(lineno) + ": ";
        std::string_view s = line;
        if (const auto hash = s.find_first_of("#;"); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(where + "malformed section header");
            section = std::string(trim(s.substr(1, s.size() - 2)));
            static const std::set<std::string> known{"grid", "solver", "kernel", "initial", "record", "output"};
            if (!known.contains(section)) throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "key outside any section");
        const std::string key = section + "." + std::string(trim(s.substr(0, eq)));
        if (!seen.insert(key).second) throw ConfigError(where + "duplicate key " + key);
        try {
            set_config_value(c, key, s.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    c.check();
    return c;
}

RunConfig parse_config_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    return parse_config(in, path.string());
}

std::string render_config(const RunConfig& c) {
    std::ostringstream o;
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
        return s;
    };
    o << "[grid]\n"
      << "geometry = " << geometry_kind_name(c.geometry) << "\n"
      << "half_width = " << format_real(c.half_width) << "\n"
      << "cells = " << c.cells << "\n"
      << "[solver]\n"
      << "eps = " << format_real(c.solver.eps) << "\n"
      << "cfl_safety = " << format_real(c.solver.cfl_safety) << "\n"
      << "extinction_threshold = " << format_real(c.solver.threshold()) << "\n"
      << "max_steps = " << c.solver.max_steps << "\n"
      << "series_stride = " << c.solver.series_stride << "\n"
      << "[kernel]\n"
      << "name = " << kernel_shape_name(c.kernel) << "\n"
      << "[initial]\n"
      << "kind = " << initial_kind_name(c.initial_kind) << "\n"
      << "dimension = " << c.initial.dimension << "\n"
      << "cap_amplitude = " << format_real(c.initial.cap_amplitude) << "\n"
      << "perturbation_amplitude = " << format_real(c.initial.perturbation_amplitude) << "\n"
      << "angular_mode = " << c.initial.angular_mode << "\n"
      << "envelope_lo = " << format_real(c.initial.envelope_lo) << "\n"
      << "envelope_hi = " << format_real(c.initial.envelope_hi) << "\n"
      << "M = " << format_real(c.initial.M) << "\n"
      << "T = " << format_real(c.self_similar_T) << "\n"
      << "[record]\n"
      << "times = " << list(c.record_times) << "\n"
      << "dyadic = " << (c.dyadic ? "true" : "false") << "\n"
      << "dyadic_levels = " << c.dyadic_levels << "\n"
      << "level = " << format_real(c.geometry_level()) << "\n"
      << "alpha = " << format_real(c.interior_alpha()) << "\n"
      << "[output]\n"
      << "dir = " << c.out_dir << "\n"
      << "snapshots = " << snapshot_format_name(c.snapshots) << "\n";
    return o.str();
}

}  // namespace flamefront
