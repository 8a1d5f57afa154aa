#include "relmech/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relmech {

namespace {

std::string format_measure(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double energy_drift(const std::vector<double>& energies) {
    const double t0 = energies.front();
    const double denom = std::max(1.0, std::fabs(t0));
    double worst = 0.0;
    for (double t : energies) worst = std::max(worst, std::fabs(t - t0) / denom);
    return worst;
}

const char* certificate_name(ContactCertificate c) {
    switch (c) {
        case ContactCertificate::analytic: return "analytic";
        case ContactCertificate::symbolic: return "symbolic";
        case ContactCertificate::sampled: return "sampled";
    }
    return "?";
}

} // namespace

// ---------------------------------------------------------------------------
// Energy conservation

DiagnosticReport check_energy_conservation(const Trajectory& t, const MetricField& m,
                                           double tol) {
    if (t.samples.empty())
        throw PreconditionError("energy conservation needs a non-empty trajectory");

    const auto energies = energy_along(t, m);
    DiagnosticReport r;
    r.check = "energy-conservation";
    r.measured = energy_drift(energies);
    r.threshold = tol;
    r.pass = r.measured <= r.threshold;
    r.examined = static_cast<long>(t.samples.size());
    r.notes = "T(0) = " + format_measure(energies.front()) + ", method " + t.method +
              ", h = " + format_measure(t.h);
    return r;
}

DiagnosticReport check_total_energy(const Trajectory& t, const MetricField& m,
                                    const Potential& u, double tol) {
    if (t.samples.empty())
        throw PreconditionError("total energy needs a non-empty trajectory");

    auto energies = energy_along(t, m);
    for (std::size_t i = 0; i < energies.size(); ++i)
        energies[i] += u(t.samples[i].state.q);

    DiagnosticReport r;
    r.check = "total-energy";
    r.measured = energy_drift(energies);
    r.threshold = tol;
    r.pass = r.measured <= r.threshold;
    r.examined = static_cast<long>(t.samples.size());
    r.notes = "E(0) = T + U = " + format_measure(energies.front());
    return r;
}

// ---------------------------------------------------------------------------
// check_criterio

CriterioResult check_criterio(const ForceForm& f, const MetricField& m,
                              const CriterioParams& params) {
    CriterioResult out;

    const ContactCheck contact = is_contact(f, params.sampler, params.n_samples,
                                            params.contact_tol);
    out.contact.check = "criterio.contact";
    out.contact.pass = contact.contact;
    out.contact.measured = contact.max_residual;
    out.contact.threshold = params.contact_tol;
    out.contact.examined = contact.samples;
    out.contact.seed = contact.seed;
    out.contact.notes = std::string("certificate: ") + certificate_name(contact.certificate) +
                        (contact.certificate == ContactCertificate::sampled
                             ? " (pass = statistical evidence, fail = witness)"
                             : "");

    const auto sode = assemble_sode(m, f);
    const auto traj = integrate(sode, params.initial, params.h, params.steps,
                                {params.method, false});
    out.energy = check_energy_conservation(traj, m, params.energy_tol);
    out.energy.check = "criterio.energy";

    out.agree = out.contact.pass == out.energy.pass;
    out.agreement.check = "criterio.agreement";
    out.agreement.pass = out.agree;
    out.agreement.measured = out.agree ? 0.0 : 1.0;
    out.agreement.threshold = 0.5;
    out.agreement.examined = out.contact.examined + out.energy.examined;
    out.agreement.seed = out.contact.seed;
    out.agreement.notes = std::string("contact ") + (out.contact.pass ? "pass" : "fail") +
                          " / conservation " + (out.energy.pass ? "pass" : "fail") +
                          "; the two verdicts must agree";
    return out;
}

// ---------------------------------------------------------------------------
// check_metric_independence

DiagnosticReport check_metric_independence(const ForceForm& f,
                                           const std::vector<MetricField>& metrics,
                                           const CriterioParams& params) {
    if (metrics.size() < 2)
        throw PreconditionError("metric independence needs at least two metrics");
    const ContactCheck contact = is_contact(f, params.sampler, params.n_samples,
                                            params.contact_tol);
    if (!contact.contact)
        throw PreconditionError(
            "metric independence applies to contact forces only; the contact test failed "
            "with max residual " + format_measure(contact.max_residual));

    DiagnosticReport r;
    r.check = "metric-independence";
    r.threshold = params.energy_tol;
    r.seed = params.sampler.seed();
    r.measured = 0.0;

    std::ostringstream notes;
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        const auto sode = assemble_sode(metrics[i], f);
        const auto traj = integrate(sode, params.initial, params.h, params.steps,
                                    {params.method, false});
        const double drift = energy_drift(energy_along(traj, metrics[i]));
        r.measured = std::max(r.measured, drift);
        r.examined += static_cast<long>(traj.samples.size());
        if (i) notes << ", ";
        notes << "metric " << i + 1 << " drift " << format_measure(drift);
    }
    r.pass = r.measured <= r.threshold;
    r.notes = notes.str() + "; each run judged by its own kinetic energy";
    return r;
}

// ---------------------------------------------------------------------------
// check_two_form_characterization

TwoFormCharacterization check_two_form_characterization(
    const ForceForm& f, const MetricField& m, const std::vector<std::vector<double>>& q_grid,
    double tol, const StateSampler& sampler, int n_samples, double contact_tol) {
    const int n = f.dimension();
    if (q_grid.empty())
        throw PreconditionError("two-form characterization needs at least one grid point");

    TwoFormCharacterization out;
    auto rng = sampler.make_rng();

    for (const auto& q : q_grid) {
        if (static_cast<int>(q.size()) != n)
            throw DimensionError("grid point dimension does not match the force's chart");

        // extraction: row i of M is alpha at the i-th basis velocity
        std::vector<double> matrix(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            TangentState probe;
            probe.q = q;
            probe.qdot.assign(static_cast<std::size_t>(n), 0.0);
            probe.qdot[static_cast<std::size_t>(i)] = 1.0;
            const auto row = eval_force(f, probe);
            for (int j = 0; j < n; ++j)
                matrix[static_cast<std::size_t>(i) * n + j] =
                    row.components[static_cast<std::size_t>(j)];
        }

        // linearity probe: alpha(q, a v) = a alpha(q, v) and the extracted
        // matrix must reproduce alpha at sampled velocities
        for (int probe_idx = 0; probe_idx < 3; ++probe_idx) {
            TangentState s = sampler.sample(rng);
            s.q = q;
            const auto alpha = eval_force(f, s);

            double scale = 1.0;
            for (double c : alpha.components) scale = std::max(scale, std::fabs(c));

            const double a = 2.5;
            TangentState scaled = s;
            for (auto& v : scaled.qdot) v *= a;
            const auto alpha_scaled = eval_force(f, scaled);
            for (int j = 0; j < n; ++j) {
                const double want = a * alpha.components[static_cast<std::size_t>(j)];
                if (std::fabs(alpha_scaled.components[static_cast<std::size_t>(j)] - want) >
                    1e-9 * std::max(1.0, std::fabs(want)))
                    throw NonlinearityError(
                        "force is not velocity-linear (homogeneity probe failed)");
            }

            for (int j = 0; j < n; ++j) {
                double reproduced = 0.0;
                for (int i = 0; i < n; ++i)
                    reproduced += s.qdot[static_cast<std::size_t>(i)] *
                                  matrix[static_cast<std::size_t>(i) * n + j];
                if (std::fabs(reproduced - alpha.components[static_cast<std::size_t>(j)]) >
                    1e-9 * std::max(1.0, scale))
                    throw NonlinearityError(
                        "force is not velocity-linear (additivity probe failed)");
            }
        }

        // symmetric / antisymmetric split
        double sym2 = 0.0, full2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double mij = matrix[static_cast<std::size_t>(i) * n + j];
                const double mji = matrix[static_cast<std::size_t>(j) * n + i];
                sym2 += 0.25 * (mij + mji) * (mij + mji);
                full2 += mij * mij;
            }
        const double fraction = full2 == 0.0 ? 0.0 : std::sqrt(sym2 / full2);
        out.max_symmetric_fraction = std::max(out.max_symmetric_fraction, fraction);
        out.extracted.push_back(std::move(matrix));
    }

    const ContactCheck contact = is_contact(f, sampler, n_samples, contact_tol);
    out.contact = contact.contact;

    DiagnosticReport& r = out.report;
    r.examined = static_cast<long>(q_grid.size());
    r.seed = sampler.seed();

    if (contact.contact) {
        // a contact velocity-linear force is a two-form contraction exactly;
        // its extracted matrix must be antisymmetric and the induced
        // endomorphism skew for the metric
        double worst_skew = 0.0;
        for (std::size_t p = 0; p < q_grid.size(); ++p) {
            const auto me = eval_metric(m, q_grid[p]);
            std::vector<double> antisym(static_cast<std::size_t>(n) * n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    antisym[static_cast<std::size_t>(i) * n + j] =
                        0.5 * (out.extracted[p][static_cast<std::size_t>(i) * n + j] -
                               out.extracted[p][static_cast<std::size_t>(j) * n + i]);
            for (int probe_idx = 0; probe_idx < 5; ++probe_idx) {
                TangentState s = sampler.sample(rng);
                // w^l = -g^{lk} A_jk v^j, then |T2(w, v)| should vanish
                std::vector<double> w(static_cast<std::size_t>(n), 0.0);
                for (int l = 0; l < n; ++l)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k)
                            w[static_cast<std::size_t>(l)] -=
                                me.g_inv_at(l, k) * antisym[static_cast<std::size_t>(j) * n + k] *
                                s.qdot[static_cast<std::size_t>(j)];
                double pairing = 0.0, scale = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double term = me.g_at(i, j) * w[static_cast<std::size_t>(i)] *
                                            s.qdot[static_cast<std::size_t>(j)];
                        pairing += term;
                        scale += std::fabs(term);
                    }
                worst_skew = std::max(worst_skew,
                                      std::fabs(pairing) / std::max(1.0, scale));
            }
        }

        r.check = "two-form.antisymmetry";
        r.measured = std::max(out.max_symmetric_fraction, worst_skew);
        r.threshold = tol;
        r.pass = r.measured <= r.threshold;
        r.notes = "contact force: extracted matrix must be antisymmetric; worst symmetric "
                  "fraction " + format_measure(out.max_symmetric_fraction) +
                  ", worst skew pairing " + format_measure(worst_skew);
    } else {
        r.check = "two-form.symmetric-part";
        r.measured = out.max_symmetric_fraction > tol ? 0.0 : 1.0;
        r.threshold = 0.5;
        r.pass = r.measured <= r.threshold;
        r.notes = "non-contact force: symmetric fraction " +
                  format_measure(out.max_symmetric_fraction) + " must exceed " +
                  format_measure(tol) + " (detected = pass)";
    }
    return out;
}

// ---------------------------------------------------------------------------
// builtin matrix

namespace {

MetricField exp_curved_metric(const Chart& chart) {
    return MetricField::diagonal(chart, {expr::constant(1.0),
                                         expr::parse_expression("exp(q1)"),
                                         expr::constant(1.0), expr::constant(1.0)});
}

} // namespace

std::vector<MatrixCell> builtin_criterio_matrix() {
    const Chart chart = Chart::cartesian(4);

    struct NamedForce {
        std::string name;
        ForceForm force;
        bool contact;
    };
    std::vector<NamedForce> forces;
    forces.push_back({"zero", ForceForm::zero(chart), true});
    forces.push_back({"two-form",
                      from_two_form(TwoFormField::constant(chart, {{0, 1, 1.0}})), true});
    forces.push_back({"contact-generator",
                      ForceForm::covector(chart, std::vector<expr::ExprPtr>{
                                                     expr::parse_expression("q2dot"),
                                                     expr::parse_expression("-q1dot"),
                                                     expr::constant(0.0), expr::constant(0.0)}),
                      true});
    forces.push_back(
        {"potential",
         from_potential(Potential(expr::parse_expression("0.5*(q1^2+q2^2+q3^2+q4^2)"), chart)),
         false});
    forces.push_back({"drag",
                      ForceForm::covector(chart, std::vector<expr::ExprPtr>{
                                                     expr::parse_expression("q1dot"),
                                                     expr::parse_expression("q2dot"),
                                                     expr::parse_expression("q3dot"),
                                                     expr::parse_expression("q4dot")}),
                      false});

    struct NamedMetric {
        std::string name;
        MetricField metric;
    };
    std::vector<NamedMetric> metrics;
    metrics.push_back({"euclidean", MetricField::euclidean(chart)});
    metrics.push_back({"minkowski", MetricField::minkowski(chart)});
    metrics.push_back({"exp-curved", exp_curved_metric(chart)});

    const std::vector<double> q0 = {0.4, 0.3, 0.2, 0.1};
    const std::vector<double> v_default = {1.0, 0.2, 0.5, -0.3};

    std::vector<MatrixCell> cells;
    for (const auto& fo : forces) {
        for (const auto& me : metrics) {
            TangentState s0;
            s0.q = q0;
            s0.qdot = v_default;
            if (me.name == "minkowski") {
                // velocity-linear forces mix the boost plane (q1, q2) under
                // an indefinite metric; start on the contracting null branch
                // so the trajectory stays bounded for arbitrarily long runs
                if (fo.name == "two-form") s0.qdot = {1.0, -1.0, 0.5, 0.0};
                if (fo.name == "contact-generator") s0.qdot = {1.0, 1.0, 0.5, 0.0};
            }
            cells.push_back({fo.name, me.name, fo.force, me.metric, std::move(s0), fo.contact});
        }
    }
    return cells;
}

} // namespace relmech
