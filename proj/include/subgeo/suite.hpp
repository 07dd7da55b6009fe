#pragma once

// Check suites: configuration, the check registry, orchestration and the JSON
// report. The on-disk formats are described in docs/formats.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subgeo/builtins.hpp"
#include "subgeo/geodesics.hpp"

namespace subgeo {

inline constexpr int kConfigVersion = 1;
inline constexpr int kReportVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

/// An inline chart described by expression strings. Expressions are parsed
/// when the config is loaded and again when fields are built for a mode.
struct InlineManifold {
    std::string name;
    int dim = 0;
    std::vector<std::vector<std::string>> metric;  // full dim x dim, read i <= j
    /// Γ^k_ij strings indexed [k][i][j]; empty means Levi-Civita.
    std::vector<std::vector<std::vector<std::string>>> christoffel;
    Box box;
    Box domain;
};

/// A manifold given by builtin name or inline.
struct ManifoldSpec {
    std::optional<std::string> builtin;
    InlineManifold chart;
};

struct SubmersionSpec {
    ManifoldSpec base;
    std::vector<std::string> map;
    /// Empty means metric-orthogonal; otherwise n x m column generators.
    std::vector<std::vector<std::string>> horizontal;
    std::optional<std::string> phi;
};

struct GeodesicJob {
    std::string name;
    Point p0;
    Vector v0;
    double t_end = 1.0;
    double h = 1e-3;
};

struct CheckRequest {
    std::string name;
    std::optional<double> tolerance;
    /// Constant curvature k for constant_curvature.
    std::optional<double> curvature;
};

struct SuiteConfig {
    ManifoldSpec manifold;
    std::optional<SubmersionSpec> submersion;
    bool all_checks = true;
    std::vector<CheckRequest> checks;
    int samples = 64;
    std::uint64_t seed = 0;
    std::optional<Box> box;
    std::optional<Box> base_box;
    int probes = 16;
    int fiber_points = 3;
    DiffMode mode = DiffMode::Jet;
    std::vector<GeodesicJob> geodesics;
};

/// Parses and validates a config. Errors are ConfigError with a JSON-path
/// location, e.g. "manifold.metric[0][0]: unexpected character at offset 3".
SuiteConfig parse_config(std::string_view json_text);
SuiteConfig load_config(const std::filesystem::path& path);

/// What a check needs from the configured target.
enum class CheckScope {
    Manifold,        // metric and connection
    Submersion,      // any submersion
    Isometric,       // a submersion without conformal factor
    Conformal,       // a submersion with conformal factor
    Geodesic,        // a submersion and one run per geodesic job
    Bundle,          // the tangent bundle over the configured manifold
};

struct CheckInfo {
    std::string name;
    std::string paper_ref;
    std::string description;
    CheckScope scope;
    /// Tolerance in jet mode; finite-difference mode uses kFdTolerance unless
    /// this is larger.
    double tolerance;
};

inline constexpr double kJetTolerance = 1e-8;
inline constexpr double kFdTolerance = 1e-4;

/// All checks, alphabetical.
const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(std::string_view name);

/// "name [ref]  description" per check, alphabetical.
std::string list_checks_text();
/// "pattern  description" per builtin, alphabetical.
std::string list_builtins_text();

/// The configured target built for `mode`.
struct Target {
    Manifold manifold;
    std::optional<SubmersionSetup> submersion;
    Manifold bundle_base;
    Box bundle_box;
    std::optional<double> curvature;
};
Target build_target(const SuiteConfig& config);

struct Report {
    std::string target;
    std::uint64_t seed = 0;
    DiffMode mode = DiffMode::Jet;
    int samples = 0;
    std::vector<CheckResult> checks;  // sorted by name

    int count(Status s) const;
    int total_incidents() const;
    int total_evaluations() const;
    double incident_rate() const;
    /// 0 all pass, 1 any fail, 3 incident rate above 10% or any check in error.
    int exit_code() const;
};

/// Runs every requested check; failing or erroring checks do not stop the
/// run. Results are sorted by name.
Report run_suite(const SuiteConfig& config);

/// Report as JSON text. With `wall_time` false the wall_time fields are
/// written as 0 so runs can be compared byte for byte.
std::string report_json(const Report& report, bool wall_time = true);

/// Trajectory of the named job on the configured manifold.
Trajectory run_geodesic_job(const SuiteConfig& config, std::string_view job);

std::string to_string(DiffMode mode);

}  // namespace subgeo
