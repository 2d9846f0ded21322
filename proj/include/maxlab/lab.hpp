/// @file lab.hpp
/// @brief Experiment harness: configuration, scenario runners, rate fits and result files.
#pragma once

#include "maxlab/core.hpp"
#include "maxlab/shear1d.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maxlab::lab {

// ============================================================================
// Configuration
// ============================================================================

enum class Scenario { shear_xi_sweep, shear_stokes, shear_energy_audit, multid_xi_sweep, multid_audits };

std::string_view to_string(Scenario s);
/// Throws ConfigError for unknown names.
Scenario scenario_from_string(std::string_view name);
bool is_multid(Scenario s);

/// One boundary relation c_u u + c_tau tau = g with constant g.
struct BoundaryConfig {
    shear1d::BoundaryKind kind = shear1d::BoundaryKind::periodic;
    double c_u = 0.0;
    double c_tau = 0.0;
    double g = 0.0;

    shear1d::BoundarySpec spec(shear1d::Side side) const;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::shear_xi_sweep;
    int nx = 1024;  // N in 1D
    int ny = 0;     // 0 in 1D
    double y_min = 0.0;
    double y_max = 1.0;
    double T = 1.0;
    double G = 1.0;
    double c0 = 1.0;
    std::vector<double> xi_list{0.0};
    double cfl = 1.0;
    /// 1D: "sine" or "rest". 2D: "deformation-map" or "uniform-deformation".
    std::string initial_data = "sine";
    double amplitude = 1.0;
    int wavenumber = 1;
    BoundaryConfig bc_left;
    BoundaryConfig bc_right;
    int output_count = 32;
    std::vector<int> refinement;  // multid-audits only
    std::string output_dir = "maxlab-out";
    std::uint64_t seed = 0;
    int threads = 0;  // 0: OpenMP default

    bool is_2d() const { return is_multid(scenario); }
    MaterialParams params(double xi) const { return MaterialParams{G, xi, c0}; }
    /// Reference relaxation frequency xi_2, the last entry of xi_list.
    double xi_ref() const { return xi_list.back(); }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// YAML mapping of the keys documented in configs/README.md. Unknown keys,
/// wrong types and invalid values throw ConfigError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical YAML of every field, parseable by parse_config.
std::string echo_config(const ScenarioConfig& cfg);

// ============================================================================
// Rate fits
// ============================================================================

struct RatePair {
    double delta_xi = 0.0;
    double error = 0.0;
};

struct RateFitReport {
    std::vector<RatePair> pairs;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_ci_low = 0.0;   // 2.5th percentile of bootstrap slopes
    double slope_ci_high = 0.0;  // 97.5th percentile
    double constant = 0.0;       // exp(intercept)
    /// max error / delta_xi: the constant C (or C_T) of the unit-slope bound.
    double constant_unit_slope = 0.0;
    int resamples = 0;
    std::uint64_t seed = 0;
};

/// Least squares in (log delta_xi, log error) with a percentile bootstrap.
/// Throws DataError for fewer than 4 pairs or non-positive values.
RateFitReport fit_rate(const std::vector<RatePair>& pairs, std::uint64_t seed, int resamples = 1000);

nlohmann::json to_json(const RateFitReport& r);

// ============================================================================
// Result rows
// ============================================================================

inline constexpr std::string_view kResultsHeader =
    "scenario,xi_1,xi_2,t,l2_diff,rel_entropy,energy,dissipation,piola_residual,constitutive_residual";

struct ResultRow {
    std::string scenario;
    std::optional<double> xi_1;
    std::optional<double> xi_2;
    std::optional<double> t;
    std::optional<double> l2_diff;
    std::optional<double> rel_entropy;
    std::optional<double> energy;
    std::optional<double> dissipation;
    std::optional<double> piola_residual;
    std::optional<double> constitutive_residual;
};

/// "%.17g"; empty string for nullopt.
std::string format_number(std::optional<double> v);
/// Header line plus one line per row, '\n' terminated.
std::string format_results(const std::vector<ResultRow>& rows);
/// Inverse of format_results; throws DataError on a malformed file.
std::vector<ResultRow> parse_results(const std::string& text);

/// Groups rows by (scenario, xi_2) and fits each group. Shear scenarios use
/// the sup over output times of l2_diff, multid ones the value at the final
/// time. Rows with l2_diff <= 1e-12 (identical runs) are left out.
struct GroupFit {
    std::string scenario;
    double xi_2 = 0.0;
    RateFitReport fit;
};
std::vector<GroupFit> fit_results(const std::vector<ResultRow>& rows, std::uint64_t seed);

// ============================================================================
// Scenarios
// ============================================================================

struct ScenarioResult {
    std::vector<ResultRow> rows;
    nlohmann::json report;
    /// False when a solver aborted; sweeps stay true when only some points fail.
    bool ok = true;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg);

ScenarioResult run_shear_xi_sweep(const ScenarioConfig& cfg);
ScenarioResult run_shear_stokes(const ScenarioConfig& cfg);
ScenarioResult run_shear_energy_audit(const ScenarioConfig& cfg);
ScenarioResult run_multid_xi_sweep(const ScenarioConfig& cfg);
ScenarioResult run_multid_audits(const ScenarioConfig& cfg);

inline constexpr int kReportSchemaVersion = 1;

std::string sha256_hex(std::string_view data);
std::string code_version();

/// Writes results.csv, report.json and manifest.json into cfg.output_dir.
/// config_text is the file as read, echoed verbatim next to the canonical form.
void write_outputs(const ScenarioConfig& cfg, const std::string& config_text, const ScenarioResult& result);

// ============================================================================
// Invariant suite
// ============================================================================

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Fast invariants across all modules; the seed drives random state sampling.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

}  // namespace maxlab::lab
