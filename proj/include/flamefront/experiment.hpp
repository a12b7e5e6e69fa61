#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flamefront/analysis.hpp"
#include "flamefront/config.hpp"
#include "flamefront/geometry.hpp"
#include "flamefront/initdata.hpp"

namespace flamefront {

/// One row of series.csv.
struct SeriesRow {
    double t = 0.0;
    double max_u = 0.0;
    double r_in = 0.0;
    double r_out = 0.0;
    double flatness = 0.0;
    double mass = 0.0;

    bool operator==(const SeriesRow&) const = default;
};

struct InteriorRatioEntry {
    int k = 0;
    double t = 0.0;
    std::optional<InteriorRatio> ratio;
    /// Why the ratio is absent (unresolved inner ball, extinct snapshot).
    std::string note;
};

struct SelfSimilarErrorEntry {
    double t = 0.0;
    double error = 0.0;
};

struct ExperimentAnalysis {
    std::optional<ExtinctionEstimate> extinction;
    std::optional<SqrtLawRatio> sqrt_law;
    std::optional<FlatnessFit> flatness_fit;
    /// Per-level geometry even when the fit is rejected.
    std::vector<DyadicFlatness> flatness_levels;
    std::string flatness_fit_error;
    std::vector<InteriorRatioEntry> interior_ratios;
    std::vector<SelfSimilarErrorEntry> self_similar_errors;
    double gradient_sup = 0.0;
};

struct ExperimentResult {
    RunConfig config;
    bool extinct = false;
    long steps_taken = 0;
    double dt = 0.0;
    double spacing = 0.0;
    double max_increase = 0.0;
    double min_value = 0.0;
    std::optional<DyadicSchedule> schedule;
    std::vector<SeriesRow> series;
    /// Geometry of every snapshot at the configured level.
    std::vector<BoundaryGeometry> geometry;
    std::vector<ScalarField> snapshots;
    std::vector<RadialField> radial_snapshots;
    std::optional<ValidationReport> validation;
    ExperimentAnalysis analysis;
};

/// Runs the configured simulation and its analysis without touching the
/// filesystem. With record.dyadic the run is done twice: once to estimate T
/// and once with snapshots at the dyadic times of that estimate.
ExperimentResult execute(const RunConfig& config);

/// Writes series.csv, geometry.csv, analysis.json, validation.json (Cartesian
/// runs) and snapshots into dir. Every file carries the resolved config.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

std::string series_csv(const ExperimentResult& result);
std::string geometry_csv(const ExperimentResult& result);
std::string analysis_json(const ExperimentResult& result);
std::string validation_json(const ExperimentResult& result);

/// Sweep axes and the config key each one rewrites.
enum class SweepAxis { Eps, Alpha, Grid };

SweepAxis sweep_axis_from_name(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepOutcome {
    double value = 0.0;
    bool ok = false;
    std::string error;
    std::optional<ExperimentResult> result;
};

struct SweepResult {
    std::vector<SweepOutcome> outcomes;
    bool all_ok() const;
};

/// Runs one experiment per value on a pool of jobs threads. Outcomes are in
/// value order regardless of scheduling. Results of completed children are
/// kept when others fail. When out_dir is non-empty each child writes into
/// out_dir/<axis>_<value>/ and summary.csv goes to out_dir.
SweepResult sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values, int jobs,
                  const std::filesystem::path& out_dir = {});

std::string sweep_summary_csv(const RunConfig& base, SweepAxis axis, const SweepResult& result);

/// Worker count from FLAMEFRONT_JOBS, else the hardware concurrency.
int default_jobs();

}  // namespace flamefront
