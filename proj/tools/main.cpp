// relmech command line: run scenario files (or builtins), print diagnostics,
// list the builtin registry, and batch many scenarios.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "relmech/runner.hpp"
#include "relmech/scenario.hpp"

namespace {

using namespace relmech;

// a scenario argument is a file path first, a builtin name second
ScenarioLoadResult resolve(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) return load_scenario(fs::path(arg));
    if (const char* text = builtin_scenario_text(arg))
        return load_scenario_text(text, "builtin:" + arg);
    ScenarioLoadResult r;
    r.issues.push_back({0, "'" + arg + "' is neither a scenario file nor a builtin name"});
    return r;
}

void print_issues(const std::string& label, const std::vector<ScenarioIssue>& issues) {
    std::cerr << label << ": " << issues.size()
              << (issues.size() == 1 ? " issue\n" : " issues\n");
    for (const auto& iss : issues) {
        if (iss.line > 0)
            std::cerr << "  line " << iss.line << ": " << iss.message << "\n";
        else
            std::cerr << "  " << iss.message << "\n";
    }
}

int cmd_run(const std::string& arg, const RunOptions& opts, bool print_report) {
    auto loaded = resolve(arg);
    if (!loaded.ok()) {
        print_issues(arg, loaded.issues);
        return 2;
    }
    const RunResult result = run_scenario(*loaded.scenario, opts);
    if (result.exit_code == 2) {
        std::cerr << result.scenario << ": " << result.error << "\n";
        return 2;
    }
    if (print_report) {
        std::cout << render_report(*loaded.scenario, result);
    } else {
        std::cout << result.scenario << ": " << (result.all_pass ? "pass" : "fail")
                  << (result.as_expected ? "" : " (MISMATCH with expectation)") << "; outputs in "
                  << result.outdir.string() << "\n";
    }
    return result.exit_code;
}

int cmd_scenarios(bool verbose) {
    for (const auto& name : builtin_scenario_names()) {
        if (!verbose) {
            std::cout << name << "\n";
            continue;
        }
        const Scenario s = load_builtin_scenario(name);
        std::cout << name << "\n    " << s.summary_line() << "\n";
    }
    return 0;
}

int cmd_batch(const std::vector<std::string>& args, int jobs, const RunOptions& opts) {
    std::vector<BatchItem> items;
    items.reserve(args.size());
    for (const auto& arg : args) items.push_back({arg, resolve(arg)});
    const BatchResult batch = run_batch(items, jobs, opts);
    std::cout << batch.table;
    return batch.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mechanics scenarios on the tangent bundle: integrate trajectories and "
                 "certify conservation and contact properties"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    int jobs = 1;
    std::vector<std::string> batch_args;

    auto* run = app.add_subcommand("run", "run a scenario and write its artifacts");
    run->add_option("scenario", scenario_arg, "scenario file or builtin name")->required();
    run->add_option("--out", out_dir, "output root directory");
    run->add_option("--seed", seed, "override the sampling seed");

    auto* check = app.add_subcommand("check", "run the diagnostics only, write nothing");
    check->add_option("scenario", scenario_arg, "scenario file or builtin name")->required();
    check->add_option("--seed", seed, "override the sampling seed");

    auto* scenarios = app.add_subcommand("scenarios", "list the builtin scenarios");
    scenarios->add_flag("--verbose", verbose, "one summary line per scenario");

    auto* batch = app.add_subcommand("batch", "run many scenarios and print a summary table");
    batch->add_option("scenarios", batch_args, "scenario files or builtin names");
    batch->add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);
    batch->add_option("--out", out_dir, "output root directory");
    batch->add_option("--seed", seed, "override the sampling seed for every scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunOptions opts;
    opts.out_root = out_dir;
    opts.seed_override = seed;

    try {
        if (run->parsed()) return cmd_run(scenario_arg, opts, false);
        if (check->parsed()) {
            opts.write_outputs = false;
            return cmd_run(scenario_arg, opts, true);
        }
        if (scenarios->parsed()) return cmd_scenarios(verbose);
        if (batch->parsed()) return cmd_batch(batch_args, jobs, opts);
    } catch (const relmech::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
