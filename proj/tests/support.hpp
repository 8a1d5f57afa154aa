#pragma once

// Shared test utilities: deterministic random sampling, a random expression
// generator, and independent numeric oracles (finite differences, closed
// forms).  Everything here stays independent of the library code it checks.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "relmech/expr.hpp"
#include "relmech/geometry.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// Reference metrics used across the suites.

/// Plane metric in polar coordinates (r, theta): diag(1, r^2).
inline relmech::MetricField polar_metric() {
    auto chart = relmech::Chart::make({"r", "theta"});
    return relmech::MetricField::diagonal(
        chart, {relmech::expr::constant(1.0), relmech::expr::parse_expression("r^2")});
}

/// Same metric through the native-callable (finite-difference) route.
inline relmech::MetricField polar_metric_native() {
    auto chart = relmech::Chart::make({"r", "theta"});
    std::vector<relmech::MetricField::Entry> entries;
    entries.push_back({0, 0, relmech::CoordFunction::from_callable(
                                 [](std::span<const double>) { return 1.0; })});
    entries.push_back({1, 1, relmech::CoordFunction::from_callable(
                                 [](std::span<const double> q) { return q[0] * q[0]; })});
    return relmech::MetricField(chart, std::move(entries));
}

/// Curved positive-definite 4D metric diag(1, exp(q1), 1, 1); smooth and
/// non-degenerate on all of R^4.
inline relmech::MetricField exp_metric4() {
    auto chart = relmech::Chart::cartesian(4);
    return relmech::MetricField::diagonal(chart, {relmech::expr::constant(1.0),
                                                  relmech::expr::parse_expression("exp(q1)"),
                                                  relmech::expr::constant(1.0),
                                                  relmech::expr::constant(1.0)});
}

/// Hand-derived Levi-Civita closed form for diag(1, r^2):
///   Gamma^r_theta,theta = -r,  Gamma^theta_r,theta = 1/r,  all others zero.
inline double polar_gamma_closed_form(int l, int i, int j, double r) {
    if (l == 0 && i == 1 && j == 1) return -r;
    if (l == 1 && ((i == 0 && j == 1) || (i == 1 && j == 0))) return 1.0 / r;
    return 0.0;
}

// Uniform double in [lo, hi) mapped directly from the raw 64-bit stream so
// results are identical on every platform (std distributions are not).
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { // inclusive
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// ---------------------------------------------------------------------------
// Random expression generator.
//
// Produces trees over the variables given, covering every node kind the
// differentiator supports.  Constants are non-negative (negation is a node),
// exponents are integer constants, and ln/sqrt arguments are wrapped as
// u*u + 1 so they are defined on all of R.  abs is included but the caller
// guards comparison points away from its kink.

struct GeneratedExpr {
    relmech::expr::ExprPtr tree;
    std::vector<relmech::expr::ExprPtr> abs_args; // for kink guards
};

inline GeneratedExpr generate_expression(std::mt19937_64& rng,
                                         const std::vector<std::string>& vars,
                                         int depth) {
    using namespace relmech::expr;
    GeneratedExpr out;

    auto gen = [&](auto&& self, int d) -> ExprPtr {
        if (d <= 0 || uniform(rng, 0, 1) < 0.25) {
            if (uniform(rng, 0, 1) < 0.6) {
                return variable(vars[static_cast<std::size_t>(
                    uniform_int(rng, 0, static_cast<int>(vars.size()) - 1))]);
            }
            return constant(std::round(uniform(rng, 0, 4) * 100.0) / 100.0);
        }
        const int pick = uniform_int(rng, 0, 11);
        switch (pick) {
            case 0: return binary(BinaryOp::add, self(self, d - 1), self(self, d - 1));
            case 1: return binary(BinaryOp::sub, self(self, d - 1), self(self, d - 1));
            case 2:
            case 3: return binary(BinaryOp::mul, self(self, d - 1), self(self, d - 1));
            case 4: {
                // divisor bounded away from zero on the sample box by u*u + c
                ExprPtr u = self(self, d - 1);
                ExprPtr denom = binary(BinaryOp::add, binary(BinaryOp::mul, u, u),
                                       constant(std::round(uniform(rng, 1, 3) * 10.0) / 10.0));
                return binary(BinaryOp::div, self(self, d - 1), std::move(denom));
            }
            case 5:
                return binary(BinaryOp::pow, self(self, d - 1),
                              constant(static_cast<double>(uniform_int(rng, 2, 3))));
            case 6: return negate(self(self, d - 1));
            case 7: return call(Func::sin, self(self, d - 1));
            case 8: return call(Func::cos, self(self, d - 1));
            case 9: {
                // keep exp arguments tame
                ExprPtr u = self(self, d - 1);
                return call(Func::exp, binary(BinaryOp::div, std::move(u), constant(8.0)));
            }
            case 10: {
                ExprPtr u = self(self, d - 1);
                ExprPtr guarded =
                    binary(BinaryOp::add, binary(BinaryOp::mul, u, u), constant(1.0));
                return call(uniform(rng, 0, 1) < 0.5 ? Func::ln : Func::sqrt,
                            std::move(guarded));
            }
            default: {
                ExprPtr u = self(self, d - 1);
                out.abs_args.push_back(u);
                return call(Func::abs, std::move(u));
            }
        }
    };

    out.tree = gen(gen, depth);
    return out;
}

// ---------------------------------------------------------------------------
// Central finite difference oracle, h = 1e-6.

inline double central_difference(const relmech::expr::ExprPtr& e,
                                 relmech::expr::Environment env,
                                 const std::string& var, double h = 1e-6) {
    const double x = env.at(var);
    env[var] = x + h;
    const double above = relmech::expr::evaluate(e, env);
    env[var] = x - h;
    const double below = relmech::expr::evaluate(e, env);
    return (above - below) / (2.0 * h);
}

} // namespace testsupport
