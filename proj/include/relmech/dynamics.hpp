#pragma once

/// Assembly and integration of the equation of motion determined by a
/// metric and a work form.  In coordinates the acceleration is
///
///   qddot^l = -( g^{lk} alpha_k + Gamma^l_ij qdot^i qdot^j ),
///
/// so a zero force gives the geodesic equation and the difference between
/// the forced and geodesic accelerations is the covariant value
/// -g^{lk} alpha_k.

#include <string>
#include <vector>

#include "relmech/errors.hpp"
#include "relmech/forces.hpp"
#include "relmech/geometry.hpp"

namespace relmech {

// ---------------------------------------------------------------------------
// SodeField

/// The assembled second-order equation: a map from tangent states to
/// coordinate accelerations.  Immutable and shareable.
class SodeField {
public:
    SodeField(MetricField metric, ForceForm force);

    const MetricField& metric() const { return metric_; }
    const ForceForm& force() const { return force_; }
    int dimension() const { return metric_.dimension(); }

    /// qddot at a state; throws SingularMetricError / expression domain
    /// errors where the scenario leaves its domain.
    std::vector<double> acceleration(const TangentState& s) const;

private:
    MetricField metric_;
    ForceForm force_;
};

SodeField assemble_sode(MetricField metric, ForceForm force);

/// The zero-force equation; solutions are the metric's geodesics.
SodeField geodesic_field(MetricField metric);

// ---------------------------------------------------------------------------
// Covariant value

/// The vertical difference between the forced and geodesic equations, read
/// as a tangent vector: components -g^{lk} alpha_k.
struct CovariantValue {
    std::vector<double> components;
};

CovariantValue covariant_value(const MetricField& m, const ForceForm& f,
                               const TangentState& s);

// ---------------------------------------------------------------------------
// Integration

enum class IntegrationMethod { rk4, euler, verlet };

const char* method_name(IntegrationMethod m);

/// Parse "rk4" / "euler" / "verlet"; throws Error on anything else.
IntegrationMethod parse_method(const std::string& name);

struct IntegrateOptions {
    IntegrationMethod method{IntegrationMethod::rk4};

    /// After each step rescale qdot to restore the initial kinetic energy.
    /// A constraint-restoration device, off by default so conservation
    /// diagnostics measure the integrator honestly.  Only applies when the
    /// initial T is nonzero and the current T has the same sign.
    bool project_energy{false};
};

/// Fixed-step trajectory through the tangent bundle.
struct Trajectory {
    struct Sample {
        double t;
        TangentState state;
    };
    std::vector<Sample> samples; // samples[0] = (0, s0); uniform spacing h
    double h{0.0};
    std::string method;
};

/// Raised when a step fails; carries the index of the failing step (counted
/// from 0) and the last good sample.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what_arg, long step_index, Trajectory::Sample last_good)
        : Error(what_arg), step_index_(step_index), last_good_(std::move(last_good)) {}

    long step_index() const { return step_index_; }
    const Trajectory::Sample& last_good() const { return last_good_; }

private:
    long step_index_;
    Trajectory::Sample last_good_;
};

/// Advance the first-order system (qdot, qddot) with a fixed step.  rk4 is
/// the default and the method every conservation figure in the docs refers
/// to; euler is first-order; verlet is a velocity-Verlet-like scheme that
/// is second order (exact Verlet only for velocity-independent forces).
Trajectory integrate(const SodeField& d, const TangentState& s0, double h, long steps,
                     IntegrateOptions options = {});

/// Kinetic energy at each trajectory sample.
std::vector<double> energy_along(const Trajectory& t, const MetricField& m);

} // namespace relmech
