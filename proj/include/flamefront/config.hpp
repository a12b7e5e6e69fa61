#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flamefront/initdata.hpp"
#include "flamefront/reaction.hpp"
#include "flamefront/record.hpp"

namespace flamefront {

enum class GeometryKind { Cartesian, Radial };
enum class InitialKind { Cap, SelfSimilar };
enum class SnapshotFormat { None, Text, Binary };

/// One experiment. Every key has a default, so an empty file is a valid
/// (Cartesian cap) configuration.
///
///   [grid]     geometry = cartesian|radial, half_width, cells
///   [solver]   eps, cfl_safety, extinction_threshold, max_steps, series_stride
///   [kernel]   name = smooth_bump|poly_bump
///   [initial]  kind = cap|self_similar, dimension, cap_amplitude,
///              perturbation_amplitude, angular_mode, envelope_lo,
///              envelope_hi, M, T
///   [record]   times (comma list), dyadic, dyadic_levels, level, alpha
///   [output]   dir, snapshots = none|text|binary
struct RunConfig {
    GeometryKind geometry = GeometryKind::Cartesian;
    /// Cartesian half width W, or r_max for radial runs.
    double half_width = 1.1;
    int cells = 256;

    SolverParams solver = [] {
        SolverParams p;
        p.cfl_safety = 0.9;
        p.series_stride = 10;
        return p;
    }();
    KernelShape kernel = KernelShape::SmoothBump;

    InitialKind initial_kind = InitialKind::Cap;
    InitialDataSpec initial;
    /// Extinction time of the self-similar initial data.
    double self_similar_T = 1.0;

    std::vector<double> record_times;
    bool dyadic = false;
    int dyadic_levels = 12;
    /// Geometry level; defaults to eps / 10.
    std::optional<double> level;
    /// Interior-ratio alpha; defaults to the perturbation amplitude, or 0.1.
    std::optional<double> alpha;

    std::string out_dir = "out";
    SnapshotFormat snapshots = SnapshotFormat::None;

    double geometry_level() const { return level.value_or(solver.eps / 10.0); }
    double interior_alpha() const;

    /// Throws ConfigError on inconsistent values.
    void check() const;
};

/// Applies one "section.key" = value assignment. Unknown keys and malformed
/// values are ConfigErrors naming the key.
void set_config_value(RunConfig& config, std::string_view dotted_key, std::string_view value);

RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig parse_config_string(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration in the file syntax, one key per line, fixed
/// order. parse_config(render_config(c)) reproduces c.
std::string render_config(const RunConfig& config);

std::string geometry_kind_name(GeometryKind kind);
std::string initial_kind_name(InitialKind kind);
std::string snapshot_format_name(SnapshotFormat format);

/// Shortest round-trip decimal form.
std::string format_real(double value);

}  // namespace flamefront
