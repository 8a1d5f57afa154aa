#pragma once

/// Pseudo-Riemannian metric fields on a single coordinate chart and their
/// pointwise artifacts: inverse, partial derivatives, Christoffel symbols,
/// kinetic energy and the momentum covector.
///
/// Sign conventions are never "fixed up": the metric may be indefinite, so
/// kinetic energy can be negative or zero and every consumer must cope.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "relmech/errors.hpp"
#include "relmech/expr.hpp"

namespace relmech {

// ---------------------------------------------------------------------------
// Chart

/// A single global coordinate chart: n distinct coordinate names plus the
/// derived velocity names (coordinate name + "dot" suffix).  Coordinate and
/// velocity names must be pairwise distinct.
class Chart {
public:
    static Chart make(std::vector<std::string> coordinate_names);

    /// Convenience chart with names q1..qn.
    static Chart cartesian(int n);

    int dimension() const { return static_cast<int>(coordinates_.size()); }
    const std::vector<std::string>& coordinates() const { return coordinates_; }
    const std::vector<std::string>& velocities() const { return velocities_; }

    /// Coordinate names followed by velocity names; the slot layout used to
    /// compile expressions of (q, qdot).
    const std::vector<std::string>& phase_names() const { return phase_names_; }

    /// Index of a coordinate name, or -1.
    int coordinate_index(std::string_view name) const;

private:
    Chart() = default;
    std::vector<std::string> coordinates_;
    std::vector<std::string> velocities_;
    std::vector<std::string> phase_names_;
};

// ---------------------------------------------------------------------------
// States and covectors

/// A point of the tangent bundle: coordinates q plus velocities qdot.
struct TangentState {
    std::vector<double> q;
    std::vector<double> qdot;

    int dimension() const { return static_cast<int>(q.size()); }
};

struct Covector {
    std::vector<double> components;

    int dimension() const { return static_cast<int>(components.size()); }
};

// ---------------------------------------------------------------------------
// Scalar functions of the coordinates

/// A scalar function of q, either expression-backed (differentiated exactly)
/// or a native callable (differentiated by central differences).
class CoordFunction {
public:
    CoordFunction(); // identically zero
    static CoordFunction constant(double value);
    static CoordFunction from_expression(expr::ExprPtr e, const Chart& chart);
    static CoordFunction from_callable(std::function<double(std::span<const double>)> fn);

    double operator()(std::span<const double> q) const;

    bool expression_backed() const { return static_cast<bool>(expression_); }
    const expr::ExprPtr& expression() const { return expression_; }

    /// False for the default-constructed (identically zero) function.
    bool defined() const { return expression_ || callable_; }

private:
    expr::ExprPtr expression_;    // null when native
    expr::Compiled compiled_;
    std::function<double(std::span<const double>)> callable_;
};

// ---------------------------------------------------------------------------
// Metric

/// Pointwise metric data at one evaluation point.
struct MetricEval {
    int n{0};
    std::vector<double> g;      // n x n, row-major, symmetric
    std::vector<double> g_inv;  // n x n, row-major
    std::vector<double> dg;     // n x n x n; dg(i,j,k) = d_i g_jk, symmetric in (j,k)
    double det_g{0.0};

    double g_at(int j, int k) const { return g[static_cast<std::size_t>(j) * n + k]; }
    double g_inv_at(int l, int k) const { return g_inv[static_cast<std::size_t>(l) * n + k]; }
    double dg_at(int i, int j, int k) const {
        return dg[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
};

/// Christoffel symbols (second kind) at one evaluation point; symmetric in
/// the lower indices by construction.
struct ChristoffelEval {
    int n{0};
    std::vector<double> gamma; // n x n x n; gamma(l,i,j)

    double at(int l, int i, int j) const {
        return gamma[(static_cast<std::size_t>(l) * n + i) * n + j];
    }
};

/// Symmetric field of metric components g_jk(q).  Only j <= k is stored, so
/// symmetry holds structurally.  Components may mix expression-backed and
/// native entries; unset entries are zero.
class MetricField {
public:
    struct Entry {
        int j;
        int k;
        CoordFunction component;
    };

    MetricField(Chart chart, std::vector<Entry> entries);

    static MetricField euclidean(Chart chart);
    static MetricField minkowski(Chart chart); // diag(+1, -1, ..., -1)

    /// Diagonal metric from one expression per coordinate.
    static MetricField diagonal(Chart chart, std::vector<expr::ExprPtr> components);

    const Chart& chart() const { return *chart_; }
    int dimension() const { return chart_->dimension(); }

    /// The stored component function for (j, k); order-insensitive.
    const CoordFunction& component(int j, int k) const;

private:
    friend MetricEval eval_metric(const MetricField&, std::span<const double>);

    struct Slot {
        CoordFunction f;
        bool exact{false};                    // exact symbolic partials available
        std::vector<expr::Compiled> partials; // one per coordinate when exact
    };

    std::size_t slot_index(int j, int k) const;

    std::shared_ptr<const Chart> chart_;
    std::vector<Slot> slots_; // lower triangle, j >= k
};

// ---------------------------------------------------------------------------
// Operations

/// Evaluate metric components, the inverse (by pivoted elimination), the
/// determinant, and all first partial derivatives at q.  Derivatives are
/// exact for expression-backed components and central differences with
/// h = 1e-6 * max(1, |q_i|) for native callables.
///
/// Throws SingularMetricError when |det g| <= 1e-12 * (product of row
/// max-abs values): the scale-aware degeneracy test.
MetricEval eval_metric(const MetricField& m, std::span<const double> q);

/// Levi-Civita connection coefficients from a metric evaluation:
///   Gamma^l_ij = 1/2 g^{lk} (d_i g_jk + d_j g_ik - d_k g_ij).
ChristoffelEval christoffel(const MetricEval& me);

/// T = 1/2 g_ij qdot^i qdot^j; may be negative or zero for indefinite metrics.
double kinetic_energy(const TangentState& s, const MetricEval& me);

/// p_j = g_jk qdot^k; satisfies <momentum, qdot> = 2 T identically.
Covector momentum(const TangentState& s, const MetricEval& me);

/// Pairing of a covector with the state's velocity: sum_i alpha_i qdot^i.
/// At qdot = 0 the pairing is 0 for any covector.
double dotted_pairing(const Covector& alpha, const TangentState& s);

} // namespace relmech
