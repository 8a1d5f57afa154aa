#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "relmech/dynamics.hpp"
#include "support.hpp"

using namespace relmech;
using testsupport::uniform;

namespace {

constexpr double pi = std::numbers::pi;

// Closed-form orbit for the unit two-form force on flat 3-space with
// q(0) = 0, qdot(0) = (1, 0, 0): velocity rotates clockwise with period 2*pi.
TangentState circle_oracle(double t) {
    TangentState s;
    s.q = {std::sin(t), std::cos(t) - 1.0, 0.0};
    s.qdot = {std::cos(t), -std::sin(t), 0.0};
    return s;
}

// The straight line x = 1, y = t expressed in polar coordinates; the
// geodesic oracle for diag(1, r^2) started at (r=1, theta=0, rdot=0,
// thetadot=1).
TangentState polar_line_oracle(double t) {
    TangentState s;
    const double r = std::sqrt(1.0 + t * t);
    s.q = {r, std::atan(t)};
    s.qdot = {t / r, 1.0 / (1.0 + t * t)};
    return s;
}

SodeField magnetic_sode() {
    auto chart = Chart::cartesian(3);
    auto phi = TwoFormField::constant(chart, {{0, 1, 1.0}});
    return assemble_sode(MetricField::euclidean(chart), from_two_form(phi));
}

double end_state_error_vs_circle(double h, long steps) {
    auto d = magnetic_sode();
    auto traj = integrate(d, {{0, 0, 0}, {1, 0, 0}}, h, steps);
    const auto& last = traj.samples.back();
    const auto oracle = circle_oracle(last.t);
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
        err = std::max(err, std::fabs(last.state.q[static_cast<std::size_t>(i)] -
                                      oracle.q[static_cast<std::size_t>(i)]));
        err = std::max(err, std::fabs(last.state.qdot[static_cast<std::size_t>(i)] -
                                      oracle.qdot[static_cast<std::size_t>(i)]));
    }
    return err;
}

} // namespace

TEST_CASE("assemble_sode: accelerations") {
    // flat geodesics: qddot = 0
    auto flat = assemble_sode(MetricField::euclidean(Chart::cartesian(2)),
                              ForceForm::zero(Chart::cartesian(2)));
    auto acc = flat.acceleration({{0.3, -0.4}, {1.0, 2.0}});
    CHECK(acc[0] == 0.0);
    CHECK(acc[1] == 0.0);

    // polar circular state: rddot = r thetadot^2, thetaddot = 0
    auto polar = geodesic_field(testsupport::polar_metric());
    acc = polar.acceleration({{1.0, 0.0}, {0.0, 1.0}});
    CHECK(acc[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(acc[1] == doctest::Approx(0.0).epsilon(1e-14));

    // magnetic force: qddot = (0, -v, 0) for qdot = (v, 0, 0)
    auto mag = magnetic_sode();
    const double v = 2.5;
    acc = mag.acceleration({{0, 0, 0}, {v, 0, 0}});
    CHECK(acc[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(acc[1] == doctest::Approx(-v).epsilon(1e-15));
    CHECK(acc[2] == 0.0);
}

TEST_CASE("geodesic_field: flat metrics and the polar closed form") {
    for (auto m : {MetricField::euclidean(Chart::cartesian(3)),
                   MetricField::minkowski(Chart::cartesian(4))}) {
        auto g = geodesic_field(m);
        const int n = m.dimension();
        TangentState s;
        s.q.assign(static_cast<std::size_t>(n), 0.7);
        s.qdot.assign(static_cast<std::size_t>(n), -1.3);
        for (double a : g.acceleration(s)) CHECK(a == 0.0);
    }

    // polar at (r=2, rdot=1, thetadot=1):
    //   rddot = r thetadot^2 = 2, thetaddot = -2 (1/r) rdot thetadot = -1
    auto polar = geodesic_field(testsupport::polar_metric());
    auto acc = polar.acceleration({{2.0, 0.5}, {1.0, 1.0}});
    CHECK(acc[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(acc[1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("covariant_value: the vertical part of the equation") {
    auto chart = Chart::cartesian(3);
    auto euclid = MetricField::euclidean(chart);

    auto zero = covariant_value(euclid, ForceForm::zero(chart), {{0, 0, 0}, {1, 1, 1}});
    for (double c : zero.components) CHECK(c == 0.0);

    auto grad = covariant_value(euclid,
                                from_potential(Potential(expr::parse_expression("q1"), chart)),
                                {{0.5, 0, 0}, {0, 0, 0}});
    CHECK(grad.components[0] == -1.0);
    CHECK(grad.components[1] == 0.0);
    CHECK(grad.components[2] == 0.0);

    const double v = 1.25;
    auto mag = covariant_value(euclid,
                               from_two_form(TwoFormField::constant(chart, {{0, 1, 1.0}})),
                               {{0, 0, 0}, {v, 0, 0}});
    CHECK(mag.components[0] == 0.0);
    CHECK(mag.components[1] == doctest::Approx(-v).epsilon(1e-15));
    CHECK(mag.components[2] == 0.0);
}

TEST_CASE("integrate: free particle is exact") {
    auto chart = Chart::cartesian(2);
    auto d = geodesic_field(MetricField::euclidean(chart));
    auto traj = integrate(d, {{0.0, 0.0}, {1.0, 2.0}}, 0.1, 10);
    REQUIRE(traj.samples.size() == 11);
    CHECK(traj.samples[0].t == 0.0);
    CHECK(traj.samples.back().t == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(traj.samples.back().state.q[0] - 1.0) < 1e-12);
    CHECK(std::fabs(traj.samples.back().state.q[1] - 2.0) < 1e-12);
    CHECK(traj.method == "rk4");
    CHECK(traj.h == 0.1);
}

TEST_CASE("integrate: magnetic orbit returns to the start at t = 2 pi") {
    // n h = 2 pi exactly (h ~ 1e-3); the orbit closes to integrator accuracy
    const long steps = 6283;
    const double h = 2.0 * pi / static_cast<double>(steps);
    auto d = magnetic_sode();
    auto traj = integrate(d, {{0, 0, 0}, {1, 0, 0}}, h, steps);
    const auto& last = traj.samples.back().state;
    for (int i = 0; i < 3; ++i)
        CHECK(std::fabs(last.q[static_cast<std::size_t>(i)]) < 1e-6);
    CHECK(std::fabs(last.qdot[0] - 1.0) < 1e-6);
    CHECK(std::fabs(last.qdot[1]) < 1e-6);

    // along the way the orbit tracks the closed form
    for (std::size_t k = 0; k < traj.samples.size(); k += 500) {
        const auto oracle = circle_oracle(traj.samples[k].t);
        for (int i = 0; i < 3; ++i)
            CHECK(std::fabs(traj.samples[k].state.q[static_cast<std::size_t>(i)] -
                            oracle.q[static_cast<std::size_t>(i)]) < 1e-6);
    }
}

TEST_CASE("integrate: polar geodesic matches the transformed straight line") {
    auto d = geodesic_field(testsupport::polar_metric());
    auto traj = integrate(d, {{1.0, 0.0}, {0.0, 1.0}}, 1e-3, 1000);
    for (std::size_t k = 0; k < traj.samples.size(); k += 100) {
        const auto oracle = polar_line_oracle(traj.samples[k].t);
        CHECK(std::fabs(traj.samples[k].state.q[0] - oracle.q[0]) < 1e-6);
        CHECK(std::fabs(traj.samples[k].state.q[1] - oracle.q[1]) < 1e-6);
    }
    const auto& last = traj.samples.back();
    const auto oracle = polar_line_oracle(1.0);
    CHECK(std::fabs(last.state.qdot[0] - oracle.qdot[0]) < 1e-6);
    CHECK(std::fabs(last.state.qdot[1] - oracle.qdot[1]) < 1e-6);
}

TEST_CASE("integrate: methods euler and verlet advance too") {
    auto chart = Chart::cartesian(2);
    auto d = geodesic_field(MetricField::euclidean(chart));
    for (auto method : {IntegrationMethod::euler, IntegrationMethod::verlet}) {
        auto traj = integrate(d, {{0.0, 0.0}, {1.0, 2.0}}, 0.1, 10, {method, false});
        CHECK(std::fabs(traj.samples.back().state.q[0] - 1.0) < 1e-12);
        CHECK(traj.method == method_name(method));
    }
    CHECK(parse_method("rk4") == IntegrationMethod::rk4);
    CHECK_THROWS_AS(parse_method("rk5"), Error);
}

TEST_CASE("integrate: energy projection restores the initial T") {
    auto d = magnetic_sode();
    IntegrateOptions opts;
    opts.project_energy = true;
    auto traj = integrate(d, {{0, 0, 0}, {1, 0, 0}}, 1e-2, 500, opts);
    auto energies = energy_along(traj, d.metric());
    for (double t : energies) CHECK(std::fabs(t - 0.5) < 1e-14);
}

TEST_CASE("integrate: failures carry the step index and last good state") {
    auto chart = Chart::cartesian(1);
    // native force that leaves its domain at q1 > 2
    std::vector<std::function<double(std::span<const double>, std::span<const double>)>> comps;
    comps.push_back([](std::span<const double> q, std::span<const double>) -> double {
        if (q[0] > 2.0) throw expr::NumericDomainError("force undefined for q1 > 2");
        return 0.0;
    });
    auto d = assemble_sode(MetricField::euclidean(chart), ForceForm::covector(chart, comps));
    try {
        integrate(d, {{0.0}, {1.0}}, 1e-3, 5000);
        FAIL("expected IntegrationError");
    } catch (const IntegrationError& e) {
        CHECK(e.step_index() >= 1990);
        CHECK(e.step_index() <= 2001);
        CHECK(e.last_good().state.q[0] <= 2.0 + 1e-9);
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }

    CHECK_THROWS_AS(integrate(d, {{0.0}, {1.0}}, -1.0, 10), PreconditionError);
    CHECK_THROWS_AS(integrate(d, {{0.0}, {1.0}}, 1e-3, 0), PreconditionError);
}

TEST_CASE("energy_along: constant for free motion, oscillating in a well") {
    auto chart = Chart::cartesian(2);
    auto euclid = MetricField::euclidean(chart);

    auto free_traj = integrate(geodesic_field(euclid), {{0, 0}, {0.6, -0.8}}, 1e-2, 100);
    for (double t : energy_along(free_traj, euclid)) CHECK(t == 0.5);

    // harmonic well U = 1/2 |q|^2 from rest at (1, 0): T sweeps [0, 1/2]
    auto u = Potential(expr::parse_expression("0.5*(q1^2+q2^2)"), chart);
    auto traj = integrate(assemble_sode(euclid, from_potential(u)), {{1.0, 0.0}, {0.0, 0.0}},
                          1e-3, 6284);
    auto energies = energy_along(traj, euclid);
    double lo = 1e300, hi = -1e300;
    for (double t : energies) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    CHECK(lo >= 0.0);
    CHECK(lo < 1e-6);
    CHECK(hi == doctest::Approx(0.5).epsilon(1e-6));
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: zero-force assembly equals the geodesic field exactly") {
    auto m = testsupport::exp_metric4();
    auto forced = assemble_sode(m, ForceForm::zero(m.chart()));
    auto geo = geodesic_field(m);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        TangentState s;
        for (int i = 0; i < 4; ++i) {
            s.q.push_back(uniform(rng, -1, 1));
            s.qdot.push_back(uniform(rng, -1, 1));
        }
        auto a = forced.acceleration(s);
        auto b = geo.acceleration(s);
        for (int i = 0; i < 4; ++i)
            CHECK(a[static_cast<std::size_t>(i)] == b[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("property: forced minus geodesic acceleration is the covariant value") {
    auto m = testsupport::exp_metric4();
    auto phi = TwoFormField::constant(m.chart(), {{0, 1, 1.0}, {2, 3, 0.5}});
    auto f = from_two_form(phi);
    auto forced = assemble_sode(m, f);
    auto geo = geodesic_field(m);

    std::mt19937_64 rng(78);
    for (int trial = 0; trial < 100; ++trial) {
        TangentState s;
        for (int i = 0; i < 4; ++i) {
            s.q.push_back(uniform(rng, -1, 1));
            s.qdot.push_back(uniform(rng, -1, 1));
        }
        auto a = forced.acceleration(s);
        auto b = geo.acceleration(s);
        auto w = covariant_value(m, f, s);
        for (int i = 0; i < 4; ++i)
            CHECK(std::fabs((a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]) -
                            w.components[static_cast<std::size_t>(i)]) < 1e-12);
    }
}

TEST_CASE("property: rk4 end-state error shrinks ~16x when h halves") {
    // measured on the magnetic orbit over one full period, using steps where
    // truncation still dominates double-precision roundoff
    const long base_steps = 786; // h ~ 8e-3
    const double err_h = end_state_error_vs_circle(2.0 * pi / base_steps, base_steps);
    const double err_h2 = end_state_error_vs_circle(pi / base_steps, 2 * base_steps);
    const double factor = err_h / err_h2;
    CAPTURE(err_h);
    CAPTURE(err_h2);
    CHECK(factor > 12.0);
    CHECK(factor < 20.0);
}

TEST_CASE("property: null Minkowski geodesics stay null for 10^4 steps") {
    auto m = MetricField::minkowski(Chart::cartesian(4));
    auto traj = integrate(geodesic_field(m), {{0, 0, 0, 0}, {1, 1, 0, 0}}, 1e-3, 10000);
    for (double t : energy_along(traj, m)) CHECK(std::fabs(t) < 1e-12);
}
