#include "doctest.h"

#include <cmath>
#include <random>

#include "relmech/geometry.hpp"
#include "support.hpp"

using namespace relmech;
using testsupport::uniform;

TEST_CASE("chart: names, velocities, collisions") {
    auto c = Chart::make({"r", "theta"});
    CHECK(c.dimension() == 2);
    CHECK(c.velocities()[0] == "rdot");
    CHECK(c.velocities()[1] == "thetadot");
    CHECK(c.coordinate_index("theta") == 1);
    CHECK(c.coordinate_index("phi") == -1);

    CHECK_THROWS_AS(Chart::make({"x", "x"}), DimensionError);
    // velocity of "a" is "adot", which collides with the second coordinate
    CHECK_THROWS_AS(Chart::make({"a", "adot"}), DimensionError);
    CHECK_THROWS_AS(Chart::make({}), DimensionError);
}

TEST_CASE("eval_metric: constant metric") {
    auto m = MetricField::euclidean(Chart::cartesian(2));
    auto me = eval_metric(m, std::vector<double>{3.0, -1.0});
    CHECK(me.g_at(0, 0) == 1.0);
    CHECK(me.g_at(1, 1) == 1.0);
    CHECK(me.g_at(0, 1) == 0.0);
    CHECK(me.g_inv_at(0, 0) == 1.0);
    CHECK(me.g_inv_at(1, 1) == 1.0);
    CHECK(me.det_g == 1.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) CHECK(me.dg_at(i, j, k) == 0.0);
}

TEST_CASE("eval_metric: polar components, inverse and derivatives") {
    auto m = testsupport::polar_metric();
    auto me = eval_metric(m, std::vector<double>{2.0, 0.7});
    CHECK(me.g_at(0, 0) == 1.0);
    CHECK(me.g_at(1, 1) == 4.0);
    CHECK(me.g_inv_at(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
    // d_r g_theta,theta = 2 r = 4; cross-checked against expr::differentiate
    CHECK(me.dg_at(0, 1, 1) == 4.0);
    auto d = expr::differentiate(expr::parse_expression("r^2"), "r");
    CHECK(expr::evaluate(d, {{"r", 2.0}}) == 4.0);
    CHECK(me.dg_at(1, 1, 1) == 0.0);
}

TEST_CASE("eval_metric: degenerate metric is an error") {
    auto chart = Chart::cartesian(2);
    auto m = MetricField::diagonal(chart, {expr::constant(1.0), expr::constant(0.0)});
    CHECK_THROWS_AS(eval_metric(m, std::vector<double>{0.0, 0.0}), SingularMetricError);

    // polar metric degenerates exactly at r = 0
    auto polar = testsupport::polar_metric();
    CHECK_THROWS_AS(eval_metric(polar, std::vector<double>{0.0, 1.0}), SingularMetricError);
}

TEST_CASE("christoffel: flat metrics vanish identically") {
    for (auto m : {MetricField::euclidean(Chart::cartesian(3)),
                   MetricField::minkowski(Chart::cartesian(4))}) {
        const int n = m.dimension();
        auto ch = christoffel(eval_metric(m, std::vector<double>(static_cast<std::size_t>(n), 0.3)));
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) CHECK(ch.at(l, i, j) == 0.0);
    }
}

TEST_CASE("christoffel: polar closed form") {
    auto m = testsupport::polar_metric();
    auto ch = christoffel(eval_metric(m, std::vector<double>{2.0, 0.1}));
    CHECK(ch.at(0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(ch.at(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ch.at(1, 1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ch.at(0, 0, 0) == 0.0);
    CHECK(ch.at(0, 0, 1) == 0.0);
    CHECK(ch.at(1, 1, 1) == 0.0);

    // closed form across a range of radii
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const double r = uniform(rng, 0.1, 10.0);
        auto c = christoffel(eval_metric(m, std::vector<double>{r, uniform(rng, -3.0, 3.0)}));
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double expected = testsupport::polar_gamma_closed_form(l, i, j, r);
                    CHECK(std::fabs(c.at(l, i, j) - expected) < 1e-12);
                }
    }
}

TEST_CASE("kinetic energy: signs follow the metric") {
    auto euclid = MetricField::euclidean(Chart::cartesian(2));
    auto me = eval_metric(euclid, std::vector<double>{0.0, 0.0});
    CHECK(kinetic_energy({{0.0, 0.0}, {3.0, 4.0}}, me) == 12.5);

    auto mink = MetricField::minkowski(Chart::cartesian(4));
    auto mm = eval_metric(mink, std::vector<double>{0, 0, 0, 0});
    CHECK(kinetic_energy({{0, 0, 0, 0}, {1, 0, 0, 0}}, mm) == 0.5);
    // null vector: T = 0 exactly
    CHECK(kinetic_energy({{0, 0, 0, 0}, {1, 1, 0, 0}}, mm) == 0.0);
    // spacelike: T < 0, and nobody "fixes" the sign
    CHECK(kinetic_energy({{0, 0, 0, 0}, {0, 1, 0, 0}}, mm) == -0.5);
}

TEST_CASE("momentum: lowering the velocity index") {
    auto euclid = MetricField::euclidean(Chart::cartesian(2));
    auto me = eval_metric(euclid, std::vector<double>{0.0, 0.0});
    auto p = momentum({{0.0, 0.0}, {3.0, 4.0}}, me);
    CHECK(p.components[0] == 3.0);
    CHECK(p.components[1] == 4.0);

    auto mink = MetricField::minkowski(Chart::cartesian(4));
    auto pm = momentum({{0, 0, 0, 0}, {1, 1, 0, 0}}, eval_metric(mink, std::vector<double>{0, 0, 0, 0}));
    CHECK(pm.components[0] == 1.0);
    CHECK(pm.components[1] == -1.0);

    // polar at r=2: p_theta = r^2 thetadot
    auto polar = testsupport::polar_metric();
    auto pp = momentum({{2.0, 0.0}, {1.0, 3.0}}, eval_metric(polar, std::vector<double>{2.0, 0.0}));
    CHECK(pp.components[0] == 1.0);
    CHECK(pp.components[1] == 12.0);
}

TEST_CASE("dotted pairing") {
    CHECK(dotted_pairing({{0.0, 1.0}}, {{0, 0}, {5.0, 0.0}}) == 0.0);
    CHECK(dotted_pairing({{1.0, 0.0}}, {{0, 0}, {2.0, 3.0}}) == 2.0);
    // the local contact generator alpha = (qdot2, -qdot1) pairs to zero
    const double a = 2.0, b = 3.0;
    Covector alpha{{b, -a}};
    CHECK(alpha.components[0] == 3.0);
    CHECK(alpha.components[1] == -2.0);
    CHECK(dotted_pairing(alpha, {{0, 0}, {a, b}}) == 0.0);
    // at qdot = 0 any covector pairs to zero
    CHECK(dotted_pairing({{4.0, -7.0}}, {{0, 0}, {0.0, 0.0}}) == 0.0);
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: g * g_inv = I at random points of each builtin metric") {
    struct Case {
        MetricField m;
        double lo, hi;
    };
    std::vector<Case> cases;
    cases.push_back({MetricField::euclidean(Chart::cartesian(3)), -5.0, 5.0});
    cases.push_back({MetricField::minkowski(Chart::cartesian(4)), -5.0, 5.0});
    cases.push_back({testsupport::polar_metric(), 0.2, 5.0});
    cases.push_back({testsupport::exp_metric4(), -1.0, 1.0});

    std::mt19937_64 rng(31337);
    for (const auto& c : cases) {
        const int n = c.m.dimension();
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> q(static_cast<std::size_t>(n));
            for (auto& v : q) v = uniform(rng, c.lo, c.hi);
            auto me = eval_metric(c.m, q);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    double sum = 0.0;
                    for (int k = 0; k < n; ++k) sum += me.g_at(i, k) * me.g_inv_at(k, j);
                    CHECK(std::fabs(sum - (i == j ? 1.0 : 0.0)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("property: symbolic metric derivatives match central differences") {
    auto symbolic = testsupport::polar_metric();
    auto native = testsupport::polar_metric_native();
    auto curved = testsupport::exp_metric4();

    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        // polar: symbolic route vs the native finite-difference route
        std::vector<double> q = {uniform(rng, 0.3, 4.0), uniform(rng, -3.0, 3.0)};
        auto ms = eval_metric(symbolic, q);
        auto mn = eval_metric(native, q);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double exact = ms.dg_at(i, j, k);
                    const double fd = mn.dg_at(i, j, k);
                    CHECK(std::fabs(exact - fd) < 1e-5 * std::max(1.0, std::fabs(exact)));
                }

        // curved 4D: symbolic derivative against a test-side stencil
        std::vector<double> p(4);
        for (auto& v : p) v = uniform(rng, -1.0, 1.0);
        auto mc = eval_metric(curved, p);
        const double h = 1e-6 * std::max(1.0, std::fabs(p[0]));
        const double fd = (std::exp(p[0] + h) - std::exp(p[0] - h)) / (2.0 * h);
        CHECK(std::fabs(mc.dg_at(0, 1, 1) - fd) < 1e-5 * std::max(1.0, std::fabs(fd)));
    }
}

TEST_CASE("property: <momentum, qdot> = 2 T") {
    auto metrics = std::vector<MetricField>{
        MetricField::euclidean(Chart::cartesian(3)),
        MetricField::minkowski(Chart::cartesian(4)),
        testsupport::polar_metric(),
        testsupport::exp_metric4(),
    };
    std::mt19937_64 rng(808);
    for (const auto& m : metrics) {
        const int n = m.dimension();
        for (int trial = 0; trial < 100; ++trial) {
            TangentState s;
            s.q.resize(static_cast<std::size_t>(n));
            s.qdot.resize(static_cast<std::size_t>(n));
            for (auto& v : s.q) v = uniform(rng, 0.3, 2.0);
            for (auto& v : s.qdot) v = uniform(rng, -2.0, 2.0);
            auto me = eval_metric(m, s.q);
            const double lhs = dotted_pairing(momentum(s, me), s);
            const double rhs = 2.0 * kinetic_energy(s, me);
            CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
        }
    }
}

TEST_CASE("property: christoffel lower-index symmetry is exact") {
    auto m = testsupport::exp_metric4();
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> q(4);
        for (auto& v : q) v = uniform(rng, -1.0, 1.0);
        auto ch = christoffel(eval_metric(m, q));
        for (int l = 0; l < 4; ++l)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) CHECK(ch.at(l, i, j) == ch.at(l, j, i));
    }
}
