#pragma once

/// Executable conservation checks over trajectories and force forms.  Each
/// check produces a DiagnosticReport with the measured figure, the threshold
/// it was held to, and enough context to reproduce the run.
///
/// The central check pairs two independent verdicts for one force:
///
///   (a) the metric-free contact test on the work form, and
///   (b) kinetic-energy conservation along an integrated trajectory,
///
/// which must agree: a force conserves T under a metric exactly when its
/// work form is contact.  The pairing is a two-sided numerical witness; a
/// sampled contact pass is statistical evidence, not a proof, and reports
/// say so.

#include <cstdint>
#include <string>
#include <vector>

#include "relmech/dynamics.hpp"
#include "relmech/forces.hpp"
#include "relmech/geometry.hpp"
#include "relmech/sampler.hpp"

namespace relmech {

// ---------------------------------------------------------------------------
// Reports

struct DiagnosticReport {
    std::string check;
    bool pass{false};
    double measured{0.0};
    double threshold{0.0};
    long examined{0};       // samples or steps inspected
    std::uint64_t seed{0};  // 0 when the check involves no sampling
    std::string notes;
};

// ---------------------------------------------------------------------------
// Energy conservation

/// Drift of kinetic energy along a trajectory:
///   measured = max_i |T(t_i) - T(0)| / max(1, |T(0)|),
/// normalized against max(1, |T(0)|) so null trajectories (T(0) = 0) are
/// measured absolutely rather than dividing by zero.
DiagnosticReport check_energy_conservation(const Trajectory& t, const MetricField& m,
                                           double tol);

/// Drift of total energy T + U; the classical sanity check for gradient
/// forces, contrasting with the kinetic-only conservation of contact forces.
DiagnosticReport check_total_energy(const Trajectory& t, const MetricField& m,
                                    const Potential& u, double tol);

// ---------------------------------------------------------------------------
// The two-sided witness

struct CriterioParams {
    StateSampler sampler;
    int n_samples{1000};
    double contact_tol{1e-12};
    TangentState initial;
    double h{1e-3};
    long steps{10000};
    double energy_tol{1e-7};
    IntegrationMethod method{IntegrationMethod::rk4};
};

struct CriterioResult {
    DiagnosticReport contact;   // "criterio.contact"
    DiagnosticReport energy;    // "criterio.energy"
    DiagnosticReport agreement; // "criterio.agreement": both pass or both fail
    bool agree{false};
};

CriterioResult check_criterio(const ForceForm& f, const MetricField& m,
                              const CriterioParams& params);

/// For a contact force, energy conservation cannot depend on the metric:
/// integrate the same force under each metric (each judged by its own
/// kinetic energy) and require every run to conserve.  Throws
/// PreconditionError if the force fails the contact test or fewer than two
/// metrics are given.
DiagnosticReport check_metric_independence(const ForceForm& f,
                                           const std::vector<MetricField>& metrics,
                                           const CriterioParams& params);

// ---------------------------------------------------------------------------
// Velocity-linear characterization

/// Result of probing a velocity-linear force at basis velocities.
struct TwoFormCharacterization {
    DiagnosticReport report;
    bool contact{false};
    double max_symmetric_fraction{0.0}; // worst |sym| / |matrix| over the grid
    /// Extracted matrices M_ij(q) = alpha_j(q, e_i), one per grid point,
    /// row-major n x n.  For a contact force these are the two-form
    /// coefficients.
    std::vector<std::vector<double>> extracted;
};

/// Probe alpha at basis velocities on each grid point, split the extracted
/// matrix into symmetric and antisymmetric parts, and demand that the
/// classification agrees with the contact verdict: contact forces must be
/// antisymmetric within tol (they are exactly the two-form contractions),
/// non-contact velocity-linear forces must show a symmetric part above tol.
/// Throws NonlinearityError when the velocity-linearity probe fails.
TwoFormCharacterization check_two_form_characterization(
    const ForceForm& f, const MetricField& m, const std::vector<std::vector<double>>& q_grid,
    double tol, const StateSampler& sampler, int n_samples, double contact_tol);

// ---------------------------------------------------------------------------
// The builtin force x metric matrix

/// One cell of the 5-force x 3-metric matrix used to exercise the
/// contact/conservation agreement across qualitatively different systems.
struct MatrixCell {
    std::string force_name;
    std::string metric_name;
    ForceForm force;
    MetricField metric;
    TangentState initial;
    bool expect_contact{false};
};

/// Forces {zero, two-form, contact-generator, potential, drag} crossed with
/// metrics {euclidean, minkowski, exp-curved}, all on a 4-dimensional chart.
/// Initial velocities for the minkowski cells of the velocity-linear forces
/// are aligned with the null directions of their boost planes so the
/// designed-to-pass trajectories stay bounded over long runs.
std::vector<MatrixCell> builtin_criterio_matrix();

} // namespace relmech
