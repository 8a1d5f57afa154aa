#pragma once

/// Scenario execution: integrate, run the requested checks, and write the
/// three artifacts (trajectory table, human report, machine summary).
///
/// Exit-code contract: 0 = every check matched the scenario's expectation
/// (a scenario with `expect = fail` must fail at least one check), 1 = a
/// check/expectation mismatch, 2 = usage, IO, parse or integration errors.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relmech/diagnostics.hpp"
#include "relmech/scenario.hpp"

namespace relmech {

struct RunOptions {
    std::filesystem::path out_root{"out"};
    std::optional<std::uint64_t> seed_override;
    bool write_outputs{true}; // false for check-only runs
};

struct CheckRow {
    std::string check;
    double measured{0.0};
    double threshold{0.0};
    bool pass{false};
    std::string notes;
};

struct RunResult {
    std::string scenario;
    std::vector<CheckRow> rows;
    bool all_pass{false};
    bool expect_fail{false};
    bool as_expected{false};
    int exit_code{2};
    std::string error; // set when exit_code == 2
    std::filesystem::path outdir;
    std::uint64_t seed{0};
};

RunResult run_scenario(const Scenario& s, const RunOptions& opts);

// ---------------------------------------------------------------------------
// Trajectory files
//
// Delimited text, one header row, 17-significant-digit decimal rendering so
// re-reading reproduces the in-memory doubles exactly.  Fixed column order:
//   t, q_<name>..., qdot_<name>..., T, theta_dot, alpha_dot
// where theta_dot = 2 T per row and alpha_dot is the contact residual of the
// scenario's force at the sampled state.

void write_trajectory(std::ostream& out, const Trajectory& t, const MetricField& m,
                      const ForceForm& f);

struct TrajectoryTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

TrajectoryTable read_trajectory(std::istream& in);

// ---------------------------------------------------------------------------
// Rendering

std::string render_report(const Scenario& s, const RunResult& r);

/// Flat key=value lines for machines.
std::string render_summary(const Scenario& s, const RunResult& r);

// ---------------------------------------------------------------------------
// Batch

struct BatchItem {
    std::string label; // file path or builtin name
    ScenarioLoadResult load;
};

struct BatchResult {
    std::string table; // fixed columns: scenario, check, measured, threshold, verdict
    int exit_code{0};
    std::vector<RunResult> results; // parallel to the loaded items
};

/// Run every loadable item (failures are isolated, never abort the batch)
/// with up to `jobs` scenarios in flight; the table and exit code do not
/// depend on the parallelism level.
BatchResult run_batch(const std::vector<BatchItem>& items, int jobs, const RunOptions& opts);

} // namespace relmech
