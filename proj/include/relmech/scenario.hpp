#pragma once

/// Scenario files: a sectioned, line-oriented text format declaring a chart,
/// a metric, a force, initial data, integrator settings, sampling settings
/// and the checks to run.  The normative grammar lives in
/// docs/scenario_format.md (format_version 1).
///
/// Loading is total: a malformed file yields a list of located issues, never
/// an exception or a partial scenario.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relmech/dynamics.hpp"
#include "relmech/forces.hpp"
#include "relmech/geometry.hpp"

namespace relmech {

struct IntegratorConfig {
    IntegrationMethod method{IntegrationMethod::rk4};
    double h{0.0};
    long steps{0};
    bool projection{false};
};

struct SamplingConfig {
    std::vector<double> box_lo, box_hi; // per coordinate
    int n_samples{1000};
    std::uint64_t seed{20240101};
};

enum class CheckKind { energy, contact, criterio, total_energy, two_form };

const char* check_kind_name(CheckKind k);

struct ChecksConfig {
    std::vector<CheckKind> run;
    double energy_tol{1e-7};
    double contact_tol{1e-12};
    double two_form_tol{1e-12};
};

struct OutputsConfig {
    bool trajectory{true};
    bool report{true};
    bool summary{true};
};

/// A fully validated scenario; every expression has been parsed, constants
/// substituted, and dimensions checked.
struct Scenario {
    std::string name;
    bool expect_fail{false};
    Chart chart;
    MetricField metric;
    ForceForm force;
    TangentState initial;
    IntegratorConfig integrator;
    SamplingConfig sampling;
    ChecksConfig checks;
    OutputsConfig outputs;

    StateSampler make_sampler(std::optional<std::uint64_t> seed_override = {}) const;

    /// One-line (M, T2, alpha) summary for listings.
    std::string summary_line() const;
};

struct ScenarioIssue {
    int line{0}; // 1-based; 0 for file-level issues
    std::string message;
};

struct ScenarioLoadResult {
    std::optional<Scenario> scenario;
    std::vector<ScenarioIssue> issues;

    bool ok() const { return scenario.has_value(); }
};

/// Parse and validate scenario text.  `origin` names the source in messages.
ScenarioLoadResult load_scenario_text(std::string_view text, std::string_view origin = "");

/// Load a scenario file; IO failures come back as a line-0 issue.
ScenarioLoadResult load_scenario(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Builtin registry

/// Names of the shipped scenarios, sorted lexicographically.
std::vector<std::string> builtin_scenario_names();

/// The scenario text for a builtin name; nullptr when unknown.
const char* builtin_scenario_text(std::string_view name);

/// Load a builtin by name; throws Error on an unknown name.
Scenario load_builtin_scenario(std::string_view name);

} // namespace relmech
