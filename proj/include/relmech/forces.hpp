#pragma once

/// Work (force) 1-forms on the tangent bundle, their construction from
/// potentials and from differential 2-forms, and the contact test that
/// decides whether a force conserves kinetic energy under every metric.
///
/// Conventions:
///   - A TwoFormField stores coefficients Phi_ij for i < j; the full array
///     is antisymmetric with zero diagonal.
///   - The work form of a 2-form is the contraction with the velocity,
///       alpha_j(q, qdot) = qdot^i Phi_ij(q),
///     with no 1/2 factor, so for Phi = B dq1^dq2 in 2D at qdot = (a, b)
///     the covector is alpha = (-B b, B a).  See docs/conventions.md for a
///     worked example and the sign conventions.
///   - The library never exposes a bare "force vector"; accelerations come
///     from the assembled equation of motion (dynamics module) and the
///     covariant value, which keeps signs in one place.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relmech/errors.hpp"
#include "relmech/expr.hpp"
#include "relmech/geometry.hpp"
#include "relmech/sampler.hpp"

namespace relmech {

// ---------------------------------------------------------------------------
// TwoFormField

/// Antisymmetric field Phi_ij(q) on the configuration space; only i < j is
/// stored, so antisymmetry holds structurally and the diagonal is zero.
class TwoFormField {
public:
    struct Entry {
        int i; // must satisfy i < j
        int j;
        CoordFunction coefficient;
    };

    TwoFormField(Chart chart, std::vector<Entry> entries);

    /// Constant coefficients, e.g. {{0, 1, B}} for B dq1^dq2.
    static TwoFormField constant(Chart chart, std::vector<std::tuple<int, int, double>> entries);

    const Chart& chart() const { return *chart_; }
    int dimension() const { return chart_->dimension(); }

    /// Full antisymmetric matrix at q, row-major n x n.
    std::vector<double> eval(std::span<const double> q) const;

    /// Stored coefficient for (i, j), i < j; zero function if unset.
    const CoordFunction& coefficient(int i, int j) const;

private:
    std::shared_ptr<const Chart> chart_;
    std::vector<CoordFunction> upper_; // packed i < j
    std::size_t upper_index(int i, int j) const;
};

// ---------------------------------------------------------------------------
// Potential

/// Scalar potential U(q), expression-backed so the gradient is exact.
class Potential {
public:
    Potential(expr::ExprPtr u, Chart chart);

    const Chart& chart() const { return *chart_; }
    const expr::ExprPtr& expression() const { return u_; }

    double operator()(std::span<const double> q) const;
    Covector gradient(std::span<const double> q) const;

private:
    std::shared_ptr<const Chart> chart_;
    expr::ExprPtr u_;
    expr::Compiled value_;
    std::vector<expr::Compiled> gradient_;
};

// ---------------------------------------------------------------------------
// ForceForm

enum class ForceKind { general, potential, two_form, zero };

/// A work 1-form alpha on TM: n covector components as functions of
/// (q, qdot).  Immutable; safe to share across threads.
class ForceForm {
public:
    /// The identically zero force (the geodesic case).
    static ForceForm zero(Chart chart);

    /// General covector with expression components over the chart's
    /// coordinate and velocity names.
    static ForceForm covector(Chart chart, std::vector<expr::ExprPtr> components);

    /// General covector with native components alpha_j(q, qdot).
    static ForceForm covector(
        Chart chart,
        std::vector<std::function<double(std::span<const double>, std::span<const double>)>>
            components);

    ForceKind kind() const { return kind_; }
    const Chart& chart() const { return *chart_; }
    int dimension() const { return chart_->dimension(); }

    /// Set for kind() == two_form.
    const std::optional<TwoFormField>& two_form() const { return two_form_; }
    /// Set for kind() == potential.
    const std::optional<Potential>& potential() const { return potential_; }

    /// Expression components when built from expressions (kind general).
    const std::vector<expr::ExprPtr>& component_expressions() const {
        return component_expressions_;
    }

private:
    friend ForceForm from_two_form(const TwoFormField&);
    friend ForceForm from_potential(const Potential&);
    friend Covector eval_force(const ForceForm&, const TangentState&);

    explicit ForceForm(Chart chart) : chart_(std::make_shared<const Chart>(std::move(chart))) {}

    ForceKind kind_{ForceKind::zero};
    std::shared_ptr<const Chart> chart_;
    std::vector<expr::ExprPtr> component_expressions_;
    std::vector<expr::Compiled> compiled_;
    std::vector<std::function<double(std::span<const double>, std::span<const double>)>> native_;
    std::optional<TwoFormField> two_form_;
    std::optional<Potential> potential_;
};

// ---------------------------------------------------------------------------
// Operations

/// Work form of a 2-form: alpha_j = qdot^i Phi_ij.  Velocity-linear by
/// construction and contact identically (antisymmetry kills the pairing).
ForceForm from_two_form(const TwoFormField& phi2);

/// Gradient force alpha_j = dU/dq^j; velocity-independent, and the canonical
/// non-contact contrast whenever U is non-constant.
ForceForm from_potential(const Potential& u);

/// The covector (alpha_1, ..., alpha_n) at (q, qdot).
Covector eval_force(const ForceForm& f, const TangentState& s);

/// The pairing alpha_i(s) qdot^i: zero for every state exactly when the
/// force is a contact form.
double contact_residual(const ForceForm& f, const TangentState& s);

/// How a contact verdict was certified: `analytic` for forms that vanish by
/// construction (zero forces, 2-form contractions), `symbolic` when the
/// residual expression simplifies to the literal constant 0, `sampled`
/// otherwise.
enum class ContactCertificate { analytic, symbolic, sampled };

struct ContactCheck {
    bool contact{false};
    double max_residual{0.0}; // max over samples of |alpha_dot| / (|alpha| |qdot|)
    std::uint64_t seed{0};
    int samples{0};
    ContactCertificate certificate{ContactCertificate::sampled};
};

/// Sampling-based contact test; never reads a metric, so its verdict cannot
/// depend on one.  A failure is a certificate (a concrete witness state); a
/// pass is statistical evidence unless the certificate is analytic or
/// symbolic.  Residuals are normalized by |alpha||qdot| per sample and the
/// verdict is max <= tol.
ContactCheck is_contact(const ForceForm& f, const StateSampler& sampler, int n_samples,
                        double tol);

// ---------------------------------------------------------------------------
// Endomorphism of a velocity-linear force

/// The matrix of Phi in  w^l = Phi^l_j qdot^j  for a 2-form force under a
/// metric: Phi^l_j = -g^{lk} Phi_jk.  Always skew-adjoint for the metric:
/// T2(Phi v, v) = 0.
struct EndomorphismEval {
    int n{0};
    std::vector<double> phi; // n x n row-major

    double at(int l, int j) const { return phi[static_cast<std::size_t>(l) * n + j]; }
};

EndomorphismEval endomorphism(const TwoFormField& phi2, const MetricEval& me,
                              std::span<const double> q);

} // namespace relmech
