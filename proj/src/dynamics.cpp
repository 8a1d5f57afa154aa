#include "relmech/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace relmech {

// ---------------------------------------------------------------------------
// SodeField

SodeField::SodeField(MetricField metric, ForceForm force)
    : metric_(std::move(metric)), force_(std::move(force)) {
    if (metric_.dimension() != force_.dimension())
        throw DimensionError("metric and force live on charts of different dimension");
}

std::vector<double> SodeField::acceleration(const TangentState& s) const {
    const int n = dimension();
    const auto me = eval_metric(metric_, s.q);
    const auto gamma = christoffel(me);

    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);

    // -Gamma^l_ij qdot^i qdot^j
    for (int l = 0; l < n; ++l) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                sum += gamma.at(l, i, j) * s.qdot[static_cast<std::size_t>(i)] *
                       s.qdot[static_cast<std::size_t>(j)];
        acc[static_cast<std::size_t>(l)] = -sum;
    }

    // -g^{lk} alpha_k
    if (force_.kind() != ForceKind::zero) {
        const Covector alpha = eval_force(force_, s);
        for (int l = 0; l < n; ++l) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k)
                sum += me.g_inv_at(l, k) * alpha.components[static_cast<std::size_t>(k)];
            acc[static_cast<std::size_t>(l)] -= sum;
        }
    }
    return acc;
}

SodeField assemble_sode(MetricField metric, ForceForm force) {
    return SodeField(std::move(metric), std::move(force));
}

SodeField geodesic_field(MetricField metric) {
    ForceForm zero = ForceForm::zero(metric.chart());
    return SodeField(std::move(metric), std::move(zero));
}

// ---------------------------------------------------------------------------
// Covariant value

CovariantValue covariant_value(const MetricField& m, const ForceForm& f,
                               const TangentState& s) {
    const int n = m.dimension();
    const auto me = eval_metric(m, s.q);

    CovariantValue out;
    out.components.assign(static_cast<std::size_t>(n), 0.0);
    if (f.kind() == ForceKind::zero) return out;

    const Covector alpha = eval_force(f, s);
    for (int l = 0; l < n; ++l) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k)
            sum += me.g_inv_at(l, k) * alpha.components[static_cast<std::size_t>(k)];
        out.components[static_cast<std::size_t>(l)] = -sum;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Integration

const char* method_name(IntegrationMethod m) {
    switch (m) {
        case IntegrationMethod::rk4: return "rk4";
        case IntegrationMethod::euler: return "euler";
        case IntegrationMethod::verlet: return "verlet";
    }
    return "?";
}

IntegrationMethod parse_method(const std::string& name) {
    if (name == "rk4") return IntegrationMethod::rk4;
    if (name == "euler") return IntegrationMethod::euler;
    if (name == "verlet") return IntegrationMethod::verlet;
    throw Error("unknown integration method '" + name + "'");
}

namespace {

// flat phase vector y = [q, qdot]
struct Flat {
    static void derivative(const SodeField& d, const std::vector<double>& y,
                           std::vector<double>& dy) {
        const std::size_t n = y.size() / 2;
        TangentState s;
        s.q.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
        s.qdot.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
        const auto acc = d.acceleration(s);
        dy.resize(y.size());
        for (std::size_t i = 0; i < n; ++i) {
            dy[i] = y[n + i];
            dy[n + i] = acc[i];
        }
    }
};

void rk4_step(const SodeField& d, std::vector<double>& y, double h,
              std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
              std::vector<double>& k4, std::vector<double>& tmp) {
    const std::size_t m = y.size();
    Flat::derivative(d, y, k1);
    tmp.resize(m);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    Flat::derivative(d, tmp, k2);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    Flat::derivative(d, tmp, k3);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * k3[i];
    Flat::derivative(d, tmp, k4);
    for (std::size_t i = 0; i < m; ++i)
        y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void euler_step(const SodeField& d, std::vector<double>& y, double h,
                std::vector<double>& k1) {
    Flat::derivative(d, y, k1);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h * k1[i];
}

// kick-drift-kick; the closing kick evaluates the acceleration at the
// half-step velocity, which is where "like" comes from
void verlet_step(const SodeField& d, std::vector<double>& y, double h) {
    const std::size_t n = y.size() / 2;
    TangentState s;
    s.q.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    s.qdot.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());

    auto a0 = d.acceleration(s);
    for (std::size_t i = 0; i < n; ++i) s.qdot[i] += 0.5 * h * a0[i];
    for (std::size_t i = 0; i < n; ++i) s.q[i] += h * s.qdot[i];
    auto a1 = d.acceleration(s);
    for (std::size_t i = 0; i < n; ++i) s.qdot[i] += 0.5 * h * a1[i];

    std::copy(s.q.begin(), s.q.end(), y.begin());
    std::copy(s.qdot.begin(), s.qdot.end(), y.begin() + static_cast<std::ptrdiff_t>(n));
}

} // namespace

Trajectory integrate(const SodeField& d, const TangentState& s0, double h, long steps,
                     IntegrateOptions options) {
    const int n = d.dimension();
    if (s0.dimension() != n || static_cast<int>(s0.qdot.size()) != n)
        throw DimensionError("initial state does not match the field's chart");
    if (!(h > 0.0)) throw PreconditionError("step size must be positive");
    if (steps < 1) throw PreconditionError("step count must be at least 1");

    Trajectory traj;
    traj.h = h;
    traj.method = method_name(options.method);
    traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
    traj.samples.push_back({0.0, s0});

    double initial_energy = 0.0;
    if (options.project_energy)
        initial_energy = kinetic_energy(s0, eval_metric(d.metric(), s0.q));

    std::vector<double> y(static_cast<std::size_t>(2 * n));
    std::copy(s0.q.begin(), s0.q.end(), y.begin());
    std::copy(s0.qdot.begin(), s0.qdot.end(), y.begin() + n);

    std::vector<double> k1, k2, k3, k4, tmp;

    for (long step = 0; step < steps; ++step) {
        try {
            switch (options.method) {
                case IntegrationMethod::rk4: rk4_step(d, y, h, k1, k2, k3, k4, tmp); break;
                case IntegrationMethod::euler: euler_step(d, y, h, k1); break;
                case IntegrationMethod::verlet: verlet_step(d, y, h); break;
            }

            TangentState s;
            s.q.assign(y.begin(), y.begin() + n);
            s.qdot.assign(y.begin() + n, y.end());

            if (options.project_energy) {
                const double t_now = kinetic_energy(s, eval_metric(d.metric(), s.q));
                if (initial_energy != 0.0 && t_now != 0.0 &&
                    (t_now > 0.0) == (initial_energy > 0.0)) {
                    const double scale = std::sqrt(initial_energy / t_now);
                    for (auto& v : s.qdot) v *= scale;
                    std::copy(s.qdot.begin(), s.qdot.end(), y.begin() + n);
                }
            }

            traj.samples.push_back({static_cast<double>(step + 1) * h, std::move(s)});
        } catch (const IntegrationError&) {
            throw;
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "integration failed at step " << step << " (t = "
                << traj.samples.back().t << "): " << e.what();
            throw IntegrationError(msg.str(), step, traj.samples.back());
        }
    }
    return traj;
}

std::vector<double> energy_along(const Trajectory& t, const MetricField& m) {
    std::vector<double> energies;
    energies.reserve(t.samples.size());
    for (const auto& sample : t.samples)
        energies.push_back(kinetic_energy(sample.state, eval_metric(m, sample.state.q)));
    return energies;
}

} // namespace relmech
