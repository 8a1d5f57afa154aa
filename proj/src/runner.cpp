#include "relmech/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace relmech {

namespace {

std::string full_digits(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_digits(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

CheckRow row_from_report(const DiagnosticReport& r) {
    return {r.check, r.measured, r.threshold, r.pass, r.notes};
}

} // namespace

// ---------------------------------------------------------------------------
// Trajectory IO

void write_trajectory(std::ostream& out, const Trajectory& t, const MetricField& m,
                      const ForceForm& f) {
    const Chart& chart = m.chart();
    out << "t";
    for (const auto& name : chart.coordinates()) out << ",q_" << name;
    for (const auto& name : chart.coordinates()) out << ",qdot_" << name;
    out << ",T,theta_dot,alpha_dot\n";

    for (const auto& sample : t.samples) {
        const auto me = eval_metric(m, sample.state.q);
        const double kinetic = kinetic_energy(sample.state, me);
        const double residual = contact_residual(f, sample.state);

        out << full_digits(sample.t);
        for (double v : sample.state.q) out << ',' << full_digits(v);
        for (double v : sample.state.qdot) out << ',' << full_digits(v);
        out << ',' << full_digits(kinetic) << ',' << full_digits(2.0 * kinetic) << ','
            << full_digits(residual) << '\n';
    }
}

TrajectoryTable read_trajectory(std::istream& in) {
    TrajectoryTable table;
    std::string line;
    if (!std::getline(in, line)) throw Error("trajectory file is empty");

    std::stringstream header(line);
    std::string column;
    while (std::getline(header, column, ',')) table.columns.push_back(column);

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            char* end = nullptr;
            row.push_back(std::strtod(cell.c_str(), &end));
            if (end != cell.c_str() + cell.size())
                throw Error("malformed trajectory cell '" + cell + "'");
        }
        if (row.size() != table.columns.size())
            throw Error("trajectory row width does not match the header");
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// run_scenario

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
    RunResult result;
    result.scenario = s.name;
    result.expect_fail = s.expect_fail;
    result.seed = opts.seed_override.value_or(s.sampling.seed);
    result.outdir = opts.out_root / s.name;

    try {
        const StateSampler sampler = s.make_sampler(result.seed);
        const auto sode = assemble_sode(s.metric, s.force);

        const auto trajectory =
            integrate(sode, s.initial, s.integrator.h, s.integrator.steps,
                      {s.integrator.method, s.integrator.projection});

        for (const CheckKind kind : s.checks.run) {
            switch (kind) {
                case CheckKind::energy:
                    result.rows.push_back(row_from_report(
                        check_energy_conservation(trajectory, s.metric, s.checks.energy_tol)));
                    break;

                case CheckKind::contact: {
                    const ContactCheck c =
                        is_contact(s.force, sampler, s.sampling.n_samples, s.checks.contact_tol);
                    CheckRow row;
                    row.check = "contact";
                    row.measured = c.max_residual;
                    row.threshold = s.checks.contact_tol;
                    row.pass = c.contact;
                    row.notes = std::string("certificate: ") +
                                (c.certificate == ContactCertificate::analytic  ? "analytic"
                                 : c.certificate == ContactCertificate::symbolic ? "symbolic"
                                                                                 : "sampled") +
                                ", samples " + std::to_string(c.samples);
                    result.rows.push_back(std::move(row));
                    break;
                }

                case CheckKind::criterio: {
                    CriterioParams params{sampler,
                                          s.sampling.n_samples,
                                          s.checks.contact_tol,
                                          s.initial,
                                          s.integrator.h,
                                          s.integrator.steps,
                                          s.checks.energy_tol,
                                          s.integrator.method};
                    const CriterioResult c = check_criterio(s.force, s.metric, params);
                    result.rows.push_back(row_from_report(c.contact));
                    result.rows.push_back(row_from_report(c.energy));
                    result.rows.push_back(row_from_report(c.agreement));
                    break;
                }

                case CheckKind::total_energy:
                    if (!s.force.potential())
                        throw PreconditionError(
                            "total_energy check needs a potential force");
                    result.rows.push_back(row_from_report(check_total_energy(
                        trajectory, s.metric, *s.force.potential(), s.checks.energy_tol)));
                    break;

                case CheckKind::two_form: {
                    std::vector<std::vector<double>> grid;
                    grid.push_back(s.initial.q);
                    auto rng = sampler.make_rng();
                    for (int i = 0; i < 4; ++i) grid.push_back(sampler.sample(rng).q);
                    const auto c = check_two_form_characterization(
                        s.force, s.metric, grid, s.checks.two_form_tol, sampler,
                        s.sampling.n_samples, s.checks.contact_tol);
                    result.rows.push_back(row_from_report(c.report));
                    break;
                }
            }
        }

        result.all_pass = true;
        for (const auto& row : result.rows) result.all_pass = result.all_pass && row.pass;
        result.as_expected = s.expect_fail ? !result.all_pass : result.all_pass;
        result.exit_code = result.as_expected ? 0 : 1;

        if (opts.write_outputs) {
            std::error_code ec;
            std::filesystem::create_directories(result.outdir, ec);
            if (ec) throw Error("cannot create output directory '" + result.outdir.string() +
                                "': " + ec.message());

            auto open_out = [&](const char* filename) {
                std::ofstream out(result.outdir / filename);
                if (!out)
                    throw Error("cannot write '" + (result.outdir / filename).string() + "'");
                return out;
            };

            if (s.outputs.trajectory) {
                auto out = open_out("trajectory.csv");
                write_trajectory(out, trajectory, s.metric, s.force);
            }
            if (s.outputs.report) open_out("report.txt") << render_report(s, result);
            if (s.outputs.summary) open_out("summary.txt") << render_summary(s, result);
        }
    } catch (const IntegrationError& e) {
        result.exit_code = 2;
        result.error = e.what();
    } catch (const Error& e) {
        result.exit_code = 2;
        result.error = e.what();
    }
    return result;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_report(const Scenario& s, const RunResult& r) {
    std::ostringstream out;
    out << "scenario: " << s.name << "\n";
    out << "system:   " << s.summary_line() << "\n";
    out << "seed:     " << r.seed << "\n";

    if (r.exit_code == 2) {
        out << "error:    " << r.error << "\n";
        return out.str();
    }

    out << "\n";
    out << std::left << std::setw(26) << "check" << std::setw(9) << "verdict" << std::setw(14)
        << "measured" << std::setw(14) << "threshold" << "\n";
    for (const auto& row : r.rows) {
        out << std::left << std::setw(26) << row.check << std::setw(9)
            << (row.pass ? "pass" : "fail") << std::setw(14) << short_digits(row.measured)
            << std::setw(14) << short_digits(row.threshold) << "\n";
        if (!row.notes.empty()) out << "    " << row.notes << "\n";
    }
    out << "\n";
    out << "overall: " << (r.all_pass ? "pass" : "fail") << " (expected "
        << (r.expect_fail ? "fail" : "pass") << ") -> "
        << (r.as_expected ? "as expected, exit 0" : "MISMATCH, exit 1") << "\n";
    return out.str();
}

std::string render_summary(const Scenario& s, const RunResult& r) {
    std::ostringstream out;
    out << "format_version=1\n";
    out << "scenario=" << s.name << "\n";
    out << "seed=" << r.seed << "\n";
    out << "expect=" << (s.expect_fail ? "fail" : "pass") << "\n";
    out << "method=" << method_name(s.integrator.method) << "\n";
    out << "h=" << full_digits(s.integrator.h) << "\n";
    out << "steps=" << s.integrator.steps << "\n";

    if (r.exit_code == 2) {
        out << "error=" << r.error << "\n";
        out << "exit=2\n";
        return out.str();
    }

    long passed = 0;
    for (const auto& row : r.rows) {
        out << "check." << row.check << ".pass=" << (row.pass ? "true" : "false") << "\n";
        out << "check." << row.check << ".measured=" << full_digits(row.measured) << "\n";
        out << "check." << row.check << ".threshold=" << full_digits(row.threshold) << "\n";
        if (row.pass) ++passed;
    }
    out << "checks.total=" << r.rows.size() << "\n";
    out << "checks.passed=" << passed << "\n";
    out << "overall.all_pass=" << (r.all_pass ? "true" : "false") << "\n";
    out << "overall.as_expected=" << (r.as_expected ? "true" : "false") << "\n";
    out << "exit=" << r.exit_code << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Batch

BatchResult run_batch(const std::vector<BatchItem>& items, int jobs, const RunOptions& opts) {
    BatchResult batch;
    batch.results.resize(items.size());

    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(items.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            if (!items[i].load.ok()) continue; // isolated load failure
            batch.results[i] = run_scenario(*items[i].load.scenario, opts);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    // table rows in input order: independent of the parallelism level
    std::ostringstream table;
    table << std::left << std::setw(22) << "scenario" << std::setw(26) << "check"
          << std::setw(14) << "measured" << std::setw(14) << "threshold" << "verdict\n";

    bool any_error = false;
    bool any_mismatch = false;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& item = items[i];
        if (!item.load.ok()) {
            any_error = true;
            table << std::left << std::setw(22) << item.label << std::setw(26) << "load"
                  << std::setw(14) << "-" << std::setw(14) << "-" << "error\n";
            for (const auto& iss : item.load.issues)
                table << "    line " << iss.line << ": " << iss.message << "\n";
            continue;
        }
        const RunResult& r = batch.results[i];
        if (r.exit_code == 2) {
            any_error = true;
            table << std::left << std::setw(22) << r.scenario << std::setw(26) << "run"
                  << std::setw(14) << "-" << std::setw(14) << "-" << "error\n";
            table << "    " << r.error << "\n";
            continue;
        }
        if (!r.as_expected) any_mismatch = true;
        for (const auto& row : r.rows) {
            const char* verdict = row.pass ? "pass" : (r.expect_fail ? "xfail" : "fail");
            table << std::left << std::setw(22) << r.scenario << std::setw(26) << row.check
                  << std::setw(14) << short_digits(row.measured) << std::setw(14)
                  << short_digits(row.threshold) << verdict << "\n";
        }
        if (r.rows.empty())
            table << std::left << std::setw(22) << r.scenario << std::setw(26) << "(no checks)"
                  << std::setw(14) << "-" << std::setw(14) << "-"
                  << (r.as_expected ? "pass" : "fail") << "\n";
    }

    batch.table = table.str();
    batch.exit_code = any_error ? 2 : any_mismatch ? 1 : 0;
    return batch;
}

} // namespace relmech
