#include "relmech/forces.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace relmech {

// ---------------------------------------------------------------------------
// StateSampler

StateSampler::StateSampler(std::vector<double> q_lo, std::vector<double> q_hi,
                           std::uint64_t seed)
    : q_lo_(std::move(q_lo)), q_hi_(std::move(q_hi)), seed_(seed) {
    if (q_lo_.size() != q_hi_.size() || q_lo_.empty())
        throw DimensionError("sampler box bounds must have equal, positive length");
    for (std::size_t i = 0; i < q_lo_.size(); ++i)
        if (!(q_lo_[i] < q_hi_[i]))
            throw DimensionError("sampler box has an empty side");
}

StateSampler StateSampler::unit_box(int n, std::uint64_t seed) {
    return StateSampler(std::vector<double>(static_cast<std::size_t>(n), -1.0),
                        std::vector<double>(static_cast<std::size_t>(n), 1.0), seed);
}

namespace {

double draw_uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

} // namespace

TangentState StateSampler::sample(std::mt19937_64& rng) const {
    const std::size_t n = q_lo_.size();
    TangentState s;
    s.q.resize(n);
    s.qdot.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.q[i] = draw_uniform(rng, q_lo_[i], q_hi_[i]);
    for (;;) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s.qdot[i] = draw_uniform(rng, -1.0, 1.0);
            norm2 += s.qdot[i] * s.qdot[i];
        }
        if (norm2 >= 1e-12) break; // |qdot| >= 1e-6
    }
    return s;
}

// ---------------------------------------------------------------------------
// TwoFormField

std::size_t TwoFormField::upper_index(int i, int j) const {
    // packed strict upper triangle, row i, column j > i
    const int n = dimension();
    return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
           static_cast<std::size_t>(j - i - 1);
}

TwoFormField::TwoFormField(Chart chart, std::vector<Entry> entries)
    : chart_(std::make_shared<const Chart>(std::move(chart))) {
    const int n = chart_->dimension();
    upper_.resize(static_cast<std::size_t>(n) * (n - 1) / 2);

    std::set<std::size_t> seen;
    for (auto& e : entries) {
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
            throw DimensionError("two-form component index out of range");
        if (e.i >= e.j)
            throw DimensionError("two-form components are stored for i < j only");
        const std::size_t idx = upper_index(e.i, e.j);
        if (!seen.insert(idx).second)
            throw DimensionError("two-form component given twice");
        upper_[idx] = std::move(e.coefficient);
    }
}

TwoFormField TwoFormField::constant(Chart chart,
                                    std::vector<std::tuple<int, int, double>> entries) {
    std::vector<Entry> built;
    built.reserve(entries.size());
    for (const auto& [i, j, v] : entries)
        built.push_back({i, j, CoordFunction::from_expression(expr::constant(v), chart)});
    return TwoFormField(std::move(chart), std::move(built));
}

std::vector<double> TwoFormField::eval(std::span<const double> q) const {
    const int n = dimension();
    std::vector<double> full(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = upper_[upper_index(i, j)](q);
            full[static_cast<std::size_t>(i) * n + j] = v;
            full[static_cast<std::size_t>(j) * n + i] = -v;
        }
    }
    return full;
}

const CoordFunction& TwoFormField::coefficient(int i, int j) const {
    if (i >= j) throw DimensionError("coefficient() expects i < j");
    return upper_[upper_index(i, j)];
}

// ---------------------------------------------------------------------------
// Potential

Potential::Potential(expr::ExprPtr u, Chart chart)
    : chart_(std::make_shared<const Chart>(std::move(chart))), u_(std::move(u)) {
    value_ = expr::compile(u_, chart_->coordinates());
    gradient_.reserve(static_cast<std::size_t>(chart_->dimension()));
    for (const auto& coord : chart_->coordinates())
        gradient_.push_back(
            expr::compile(expr::differentiate(u_, coord), chart_->coordinates()));
}

double Potential::operator()(std::span<const double> q) const { return value_(q); }

Covector Potential::gradient(std::span<const double> q) const {
    Covector g;
    g.components.reserve(gradient_.size());
    for (const auto& partial : gradient_) g.components.push_back(partial(q));
    return g;
}

// ---------------------------------------------------------------------------
// ForceForm construction

ForceForm ForceForm::zero(Chart chart) {
    ForceForm f(std::move(chart));
    f.kind_ = ForceKind::zero;
    return f;
}

ForceForm ForceForm::covector(Chart chart, std::vector<expr::ExprPtr> components) {
    ForceForm f(std::move(chart));
    if (static_cast<int>(components.size()) != f.chart_->dimension())
        throw DimensionError("covector force needs one component per coordinate");
    f.kind_ = ForceKind::general;
    f.component_expressions_ = std::move(components);
    f.compiled_.reserve(f.component_expressions_.size());
    for (const auto& e : f.component_expressions_)
        f.compiled_.push_back(expr::compile(e, f.chart_->phase_names()));
    return f;
}

ForceForm ForceForm::covector(
    Chart chart,
    std::vector<std::function<double(std::span<const double>, std::span<const double>)>>
        components) {
    ForceForm f(std::move(chart));
    if (static_cast<int>(components.size()) != f.chart_->dimension())
        throw DimensionError("covector force needs one component per coordinate");
    f.kind_ = ForceKind::general;
    f.native_ = std::move(components);
    return f;
}

ForceForm from_two_form(const TwoFormField& phi2) {
    ForceForm f(phi2.chart());
    f.kind_ = ForceKind::two_form;
    f.two_form_ = phi2;
    return f;
}

ForceForm from_potential(const Potential& u) {
    ForceForm f(u.chart());
    f.kind_ = ForceKind::potential;
    f.potential_ = u;
    return f;
}

// ---------------------------------------------------------------------------
// Evaluation

Covector eval_force(const ForceForm& f, const TangentState& s) {
    const int n = f.dimension();
    if (s.dimension() != n || static_cast<int>(s.qdot.size()) != n)
        throw DimensionError("state dimension does not match the force's chart");

    Covector alpha;
    alpha.components.assign(static_cast<std::size_t>(n), 0.0);

    switch (f.kind_) {
        case ForceKind::zero:
            return alpha;

        case ForceKind::potential:
            return f.potential_->gradient(s.q);

        case ForceKind::two_form: {
            // alpha_j = qdot^i Phi_ij
            const auto phi = f.two_form_->eval(s.q);
            for (int j = 0; j < n; ++j) {
                double sum = 0.0;
                for (int i = 0; i < n; ++i)
                    sum += s.qdot[static_cast<std::size_t>(i)] *
                           phi[static_cast<std::size_t>(i) * n + j];
                alpha.components[static_cast<std::size_t>(j)] = sum;
            }
            return alpha;
        }

        case ForceKind::general: {
            if (!f.compiled_.empty()) {
                std::vector<double> args(s.q);
                args.insert(args.end(), s.qdot.begin(), s.qdot.end());
                for (int j = 0; j < n; ++j)
                    alpha.components[static_cast<std::size_t>(j)] =
                        f.compiled_[static_cast<std::size_t>(j)](args);
            } else {
                for (int j = 0; j < n; ++j)
                    alpha.components[static_cast<std::size_t>(j)] =
                        f.native_[static_cast<std::size_t>(j)](s.q, s.qdot);
            }
            return alpha;
        }
    }
    return alpha;
}

double contact_residual(const ForceForm& f, const TangentState& s) {
    return dotted_pairing(eval_force(f, s), s);
}

// ---------------------------------------------------------------------------
// Contact test

namespace {

// try to prove the residual sum alpha_i * qdot^i is literally zero
bool symbolic_residual_is_zero(const ForceForm& f) {
    using namespace expr;
    const auto& chart = f.chart();

    std::vector<ExprPtr> components;
    if (f.kind() == ForceKind::general && !f.component_expressions().empty()) {
        components = f.component_expressions();
    } else if (f.kind() == ForceKind::potential) {
        for (const auto& coord : chart.coordinates())
            components.push_back(differentiate(f.potential()->expression(), coord));
    } else {
        return false;
    }

    ExprPtr sum = constant(0.0);
    for (int i = 0; i < chart.dimension(); ++i)
        sum = binary(BinaryOp::add, sum,
                     binary(BinaryOp::mul, components[static_cast<std::size_t>(i)],
                            variable(chart.velocities()[static_cast<std::size_t>(i)])));
    auto s = simplify(sum);
    return s->kind == NodeKind::constant && s->value == 0.0;
}

} // namespace

ContactCheck is_contact(const ForceForm& f, const StateSampler& sampler, int n_samples,
                        double tol) {
    if (n_samples < 1) throw PreconditionError("is_contact needs at least one sample");
    if (sampler.dimension() != f.dimension())
        throw DimensionError("sampler dimension does not match the force's chart");

    ContactCheck out;
    out.seed = sampler.seed();
    out.samples = n_samples;

    if (f.kind() == ForceKind::zero) {
        out.contact = true;
        out.max_residual = 0.0;
        out.certificate = ContactCertificate::analytic;
        return out;
    }

    if (f.kind() == ForceKind::two_form) {
        // qdot^i Phi_ij qdot^j = 0 by antisymmetry; sampling below only
        // reports the rounding floor
        out.certificate = ContactCertificate::analytic;
    } else if (symbolic_residual_is_zero(f)) {
        out.certificate = ContactCertificate::symbolic;
    } else {
        out.certificate = ContactCertificate::sampled;
    }

    auto rng = sampler.make_rng();
    double worst = 0.0;
    for (int trial = 0; trial < n_samples; ++trial) {
        const TangentState s = sampler.sample(rng);
        const Covector alpha = eval_force(f, s);

        double a2 = 0.0, v2 = 0.0;
        for (std::size_t i = 0; i < alpha.components.size(); ++i) {
            a2 += alpha.components[i] * alpha.components[i];
            v2 += s.qdot[i] * s.qdot[i];
        }
        const double denom = std::sqrt(a2) * std::sqrt(v2);
        const double residual = dotted_pairing(alpha, s);
        // |alpha_dot| <= |alpha||qdot| (Cauchy-Schwarz), so denom = 0 forces
        // residual = 0
        const double normalized = denom == 0.0 ? 0.0 : std::fabs(residual) / denom;
        worst = std::max(worst, normalized);
    }
    out.max_residual = worst;
    out.contact = worst <= tol;
    return out;
}

// ---------------------------------------------------------------------------
// Endomorphism

EndomorphismEval endomorphism(const TwoFormField& phi2, const MetricEval& me,
                              std::span<const double> q) {
    const int n = phi2.dimension();
    if (me.n != n) throw DimensionError("metric evaluation does not match the two-form");

    const auto phi_lower = phi2.eval(q);
    EndomorphismEval out;
    out.n = n;
    out.phi.assign(static_cast<std::size_t>(n) * n, 0.0);

    // Phi^l_j = -g^{lk} Phi_jk
    for (int l = 0; l < n; ++l) {
        for (int j = 0; j < n; ++j) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k)
                sum += me.g_inv_at(l, k) * phi_lower[static_cast<std::size_t>(j) * n + k];
            out.phi[static_cast<std::size_t>(l) * n + j] = -sum;
        }
    }

#ifndef NDEBUG
    // T2(Phi v, v) must vanish for every v; spot-check 10 deterministic draws
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = draw_uniform(rng, -1.0, 1.0);
        std::vector<double> w(static_cast<std::size_t>(n), 0.0);
        for (int l = 0; l < n; ++l)
            for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(l)] += out.at(l, j) * v[static_cast<std::size_t>(j)];
        double pairing = 0.0, scale = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                pairing += me.g_at(i, j) * w[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
                scale += std::fabs(me.g_at(i, j) * w[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)]);
            }
        if (std::fabs(pairing) > 1e-12 * std::max(1.0, scale))
            throw Error("endomorphism lost skew-adjointness (internal bug)");
    }
#endif
    return out;
}

} // namespace relmech
