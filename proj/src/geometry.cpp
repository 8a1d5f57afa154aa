#include "relmech/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace relmech {

// ---------------------------------------------------------------------------
// Chart

Chart Chart::make(std::vector<std::string> coordinate_names) {
    if (coordinate_names.empty())
        throw DimensionError("a chart needs at least one coordinate");

    Chart c;
    c.coordinates_ = std::move(coordinate_names);
    c.velocities_.reserve(c.coordinates_.size());
    for (const auto& name : c.coordinates_) {
        if (name.empty())
            throw DimensionError("empty coordinate name");
        c.velocities_.push_back(name + "dot");
    }

    std::set<std::string> all;
    for (const auto& name : c.coordinates_)
        if (!all.insert(name).second)
            throw DimensionError("duplicate coordinate name '" + name + "'");
    for (const auto& name : c.velocities_)
        if (!all.insert(name).second)
            throw DimensionError("velocity name '" + name +
                                 "' collides with another coordinate or velocity");

    c.phase_names_ = c.coordinates_;
    c.phase_names_.insert(c.phase_names_.end(), c.velocities_.begin(), c.velocities_.end());
    return c;
}

Chart Chart::cartesian(int n) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) names.push_back("q" + std::to_string(i));
    return make(std::move(names));
}

int Chart::coordinate_index(std::string_view name) const {
    for (std::size_t i = 0; i < coordinates_.size(); ++i)
        if (coordinates_[i] == name) return static_cast<int>(i);
    return -1;
}

// ---------------------------------------------------------------------------
// CoordFunction

CoordFunction::CoordFunction() = default;

CoordFunction CoordFunction::constant(double value) {
    return from_expression(expr::constant(value), Chart::cartesian(1));
}

CoordFunction CoordFunction::from_expression(expr::ExprPtr e, const Chart& chart) {
    CoordFunction f;
    f.compiled_ = expr::compile(e, chart.coordinates());
    f.expression_ = std::move(e);
    return f;
}

CoordFunction CoordFunction::from_callable(std::function<double(std::span<const double>)> fn) {
    CoordFunction f;
    f.callable_ = std::move(fn);
    return f;
}

double CoordFunction::operator()(std::span<const double> q) const {
    if (expression_) return compiled_(q);
    if (callable_) return callable_(q);
    return 0.0;
}

// ---------------------------------------------------------------------------
// MetricField

std::size_t MetricField::slot_index(int j, int k) const {
    const int lo = std::min(j, k);
    const int hi = std::max(j, k);
    return static_cast<std::size_t>(hi) * (hi + 1) / 2 + lo;
}

MetricField::MetricField(Chart chart, std::vector<Entry> entries)
    : chart_(std::make_shared<const Chart>(std::move(chart))) {
    const int n = chart_->dimension();
    slots_.resize(static_cast<std::size_t>(n) * (n + 1) / 2);

    std::set<std::size_t> seen;
    for (auto& entry : entries) {
        if (entry.j < 0 || entry.j >= n || entry.k < 0 || entry.k >= n)
            throw DimensionError("metric component index out of range");
        const std::size_t idx = slot_index(entry.j, entry.k);
        if (!seen.insert(idx).second)
            throw DimensionError("metric component given twice (symmetry stores j<=k once)");

        Slot slot;
        slot.f = std::move(entry.component);
        if (slot.f.expression_backed()) {
            slot.exact = true;
            slot.partials.reserve(static_cast<std::size_t>(n));
            for (const auto& coord : chart_->coordinates()) {
                auto d = expr::differentiate(slot.f.expression(), coord);
                slot.partials.push_back(expr::compile(d, chart_->coordinates()));
            }
        }
        slots_[idx] = std::move(slot);
    }
    // untouched slots keep a default CoordFunction: identically zero with
    // zero derivatives
}

MetricField MetricField::euclidean(Chart chart) {
    std::vector<Entry> entries;
    for (int i = 0; i < chart.dimension(); ++i)
        entries.push_back({i, i, CoordFunction::from_expression(expr::constant(1.0), chart)});
    return MetricField(std::move(chart), std::move(entries));
}

MetricField MetricField::minkowski(Chart chart) {
    std::vector<Entry> entries;
    for (int i = 0; i < chart.dimension(); ++i)
        entries.push_back(
            {i, i, CoordFunction::from_expression(expr::constant(i == 0 ? 1.0 : -1.0), chart)});
    return MetricField(std::move(chart), std::move(entries));
}

MetricField MetricField::diagonal(Chart chart, std::vector<expr::ExprPtr> components) {
    if (static_cast<int>(components.size()) != chart.dimension())
        throw DimensionError("diagonal metric needs one component per coordinate");
    std::vector<Entry> entries;
    for (int i = 0; i < chart.dimension(); ++i)
        entries.push_back({i, i, CoordFunction::from_expression(components[static_cast<std::size_t>(i)], chart)});
    return MetricField(std::move(chart), std::move(entries));
}

const CoordFunction& MetricField::component(int j, int k) const {
    return slots_[slot_index(j, k)].f;
}

// ---------------------------------------------------------------------------
// Dense linear algebra (pivoted Gaussian elimination; n is tiny)

namespace {

struct LuResult {
    std::vector<double> inverse;
    double det;
};

// Invert via Gauss-Jordan with partial pivoting; det from pivot products.
// Returns det = 0 when a pivot vanishes exactly.
LuResult invert(const std::vector<double>& a_in, int n) {
    std::vector<double> a = a_in;
    std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;

    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::fabs(a[static_cast<std::size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double v = std::fabs(a[static_cast<std::size_t>(r) * n + col]);
            if (v > best) { best = v; pivot = r; }
        }
        if (best == 0.0) return {std::move(inv), 0.0};
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[static_cast<std::size_t>(pivot) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
                std::swap(inv[static_cast<std::size_t>(pivot) * n + c],
                          inv[static_cast<std::size_t>(col) * n + c]);
            }
            det = -det;
        }
        const double p = a[static_cast<std::size_t>(col) * n + col];
        det *= p;
        const double ip = 1.0 / p;
        for (int c = 0; c < n; ++c) {
            a[static_cast<std::size_t>(col) * n + c] *= ip;
            inv[static_cast<std::size_t>(col) * n + c] *= ip;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[static_cast<std::size_t>(r) * n + col];
            if (factor == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[static_cast<std::size_t>(r) * n + c] -=
                    factor * a[static_cast<std::size_t>(col) * n + c];
                inv[static_cast<std::size_t>(r) * n + c] -=
                    factor * inv[static_cast<std::size_t>(col) * n + c];
            }
        }
    }
    return {std::move(inv), det};
}

} // namespace

// ---------------------------------------------------------------------------
// eval_metric

MetricEval eval_metric(const MetricField& m, std::span<const double> q) {
    const int n = m.dimension();
    if (static_cast<int>(q.size()) != n)
        throw DimensionError("coordinate array does not match the chart dimension");

    MetricEval out;
    out.n = n;
    out.g.assign(static_cast<std::size_t>(n) * n, 0.0);
    out.dg.assign(static_cast<std::size_t>(n) * n * n, 0.0);

    std::vector<double> qbuf(q.begin(), q.end());

    for (int j = 0; j < n; ++j) {
        for (int k = 0; k <= j; ++k) {
            const auto& slot = m.slots_[m.slot_index(j, k)];
            const double v = slot.f(qbuf);
            out.g[static_cast<std::size_t>(j) * n + k] = v;
            out.g[static_cast<std::size_t>(k) * n + j] = v;

            for (int i = 0; i < n; ++i) {
                double dv;
                if (slot.exact) {
                    dv = slot.partials[static_cast<std::size_t>(i)](qbuf);
                } else if (!slot.f.defined()) {
                    dv = 0.0; // untouched slot: identically zero
                } else {
                    // central differences for native components
                    const double h = 1e-6 * std::max(1.0, std::fabs(qbuf[static_cast<std::size_t>(i)]));
                    const double saved = qbuf[static_cast<std::size_t>(i)];
                    qbuf[static_cast<std::size_t>(i)] = saved + h;
                    const double above = slot.f(qbuf);
                    qbuf[static_cast<std::size_t>(i)] = saved - h;
                    const double below = slot.f(qbuf);
                    qbuf[static_cast<std::size_t>(i)] = saved;
                    dv = (above - below) / (2.0 * h);
                }
                out.dg[(static_cast<std::size_t>(i) * n + j) * n + k] = dv;
                out.dg[(static_cast<std::size_t>(i) * n + k) * n + j] = dv;
            }
        }
    }

    auto lu = invert(out.g, n);
    out.det_g = lu.det;

    // scale-aware degeneracy test: |det| <= 1e-12 * prod_i max_j |g_ij|
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
        double row_max = 0.0;
        for (int j = 0; j < n; ++j)
            row_max = std::max(row_max, std::fabs(out.g_at(i, j)));
        scale *= row_max;
    }
    if (std::fabs(out.det_g) <= 1e-12 * scale) {
        std::ostringstream msg;
        msg << "metric is singular at the evaluation point (det = " << out.det_g << ")";
        throw SingularMetricError(msg.str());
    }

    out.g_inv = std::move(lu.inverse);
    return out;
}

// ---------------------------------------------------------------------------
// christoffel

ChristoffelEval christoffel(const MetricEval& me) {
    const int n = me.n;
    ChristoffelEval out;
    out.n = n;
    out.gamma.assign(static_cast<std::size_t>(n) * n * n, 0.0);

    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = 0.0;
                for (int k = 0; k < n; ++k) {
                    sum += me.g_inv_at(l, k) *
                           (me.dg_at(i, j, k) + me.dg_at(j, i, k) - me.dg_at(k, i, j));
                }
                const double v = 0.5 * sum;
                out.gamma[(static_cast<std::size_t>(l) * n + i) * n + j] = v;
                out.gamma[(static_cast<std::size_t>(l) * n + j) * n + i] = v;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// scalars

double kinetic_energy(const TangentState& s, const MetricEval& me) {
    const int n = me.n;
    if (s.dimension() != n || static_cast<int>(s.qdot.size()) != n)
        throw DimensionError("state dimension does not match the metric evaluation");
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sum += me.g_at(i, j) * s.qdot[static_cast<std::size_t>(i)] *
                   s.qdot[static_cast<std::size_t>(j)];
    return 0.5 * sum;
}

Covector momentum(const TangentState& s, const MetricEval& me) {
    const int n = me.n;
    if (static_cast<int>(s.qdot.size()) != n)
        throw DimensionError("state dimension does not match the metric evaluation");
    Covector p;
    p.components.assign(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k)
            sum += me.g_at(j, k) * s.qdot[static_cast<std::size_t>(k)];
        p.components[static_cast<std::size_t>(j)] = sum;
    }
    return p;
}

double dotted_pairing(const Covector& alpha, const TangentState& s) {
    if (alpha.dimension() != static_cast<int>(s.qdot.size()))
        throw DimensionError("covector and state dimensions differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.qdot.size(); ++i)
        sum += alpha.components[i] * s.qdot[i];
    return sum;
}

} // namespace relmech
