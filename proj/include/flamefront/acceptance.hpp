#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace flamefront {

/// Regression values of the self-similar constants.
struct ProfileFixture {
    int n = 0;
    double R = 0.0;
    double a1 = 0.0;
};

/// FNV-1a 64 over the canonical "n R a1" lines, as 16 hex digits.
std::string fixture_checksum(const std::vector<ProfileFixture>& fixtures);

/// JSON document {"profiles": [...], "checksum": "..."}.
std::string render_profile_fixtures(const std::vector<ProfileFixture>& fixtures);

/// Reads and checks a fixtures file. Throws FixtureIntegrityError when the
/// file is unreadable, malformed, or its checksum does not match.
std::vector<ProfileFixture> load_profile_fixtures(const std::filesystem::path& path);

enum class VerifyLevel { Quick, Full };

VerifyLevel verify_level_from_name(const std::string& name);
std::string verify_level_name(VerifyLevel level);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyReport {
    VerifyLevel level = VerifyLevel::Quick;
    std::vector<CriterionResult> results;

    bool all_pass() const;
};

/// "PASS  4  flatness decay ... (12.3 s)"
std::string format_criterion(const CriterionResult& result);

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::Quick;
    std::filesystem::path fixtures;
    int jobs = 1;
    /// Receives each criterion line as soon as it is decided.
    std::function<void(const CriterionResult&)> on_result;
};

/// Runs the ten acceptance criteria. The quick level shrinks the expensive
/// runs (criteria 4, 5, 6) to coarser grids; the full level uses the
/// stated parameters. Fixture problems throw FixtureIntegrityError before any
/// criterion runs.
VerifyReport run_acceptance(const VerifyOptions& options);

}  // namespace flamefront
