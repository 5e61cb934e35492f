#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "alc/catenoid.hpp"
#include "alc/domain.hpp"

using namespace alc;

namespace {

double z2_root_oracle() {
    double lo = 1.0, hi = 2.0;
    for (int it = 0; it < 80; ++it) {
        double m = 0.5 * (lo + hi);
        (jacobi_fields(m).z2 < 0.0 ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

// Closed-form placement oracle for ellipsoids: orthogonality fixes y via
// z2(y) = b^2/a^2 - 1, then membership fixes the scale.
std::pair<double, double> ellipsoid_placement_oracle(double a, double b) {
    double target = b * b / (a * a) - 1.0;
    double lo = 1e-8, hi = 50.0;
    for (int it = 0; it < 100; ++it) {
        double m = 0.5 * (lo + hi);
        (jacobi_fields(m).z2 < target ? lo : hi) = m;
    }
    double y = 0.5 * (lo + hi);
    double L = std::asinh(y);
    double c = 1.0 / std::sqrt((1.0 + y * y) / (a * a) + L * L / (b * b));
    return {c, y};
}

}  // namespace

TEST_CASE("membership functions") {
    AxisymDomain ball = make_ball(1.0);
    CHECK(ball.phi(0.5, 0.0) == doctest::Approx(-0.75).epsilon(1e-15));
    AxisymDomain ell = make_ellipsoid(2.0, 1.0);
    CHECK(std::abs(ell.phi(2.0, 0.0)) < 1e-15);
    CHECK(std::abs(ell.phi(0.0, 1.0)) < 1e-15);
    AxisymDomain b2 = make_ellipsoid(1.3, 1.3);
    for (double r : {0.1, 0.7}) {
        CHECK(make_ball(1.3).phi(r, 0.4) == doctest::Approx(b2.phi(r, 0.4)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(make_ball(-1.0), std::domain_error);
    CHECK_THROWS_AS(make_ellipsoid(0.0, 1.0), std::domain_error);
}

TEST_CASE("critical catenoid in the ball") {
    double ybar = z2_root_oracle();
    double R = std::sqrt(1.0 + ybar * ybar + std::asinh(ybar) * std::asinh(ybar));
    CHECK(R == doctest::Approx(2.1717).epsilon(1e-4));

    AxisymDomain dom = make_ball(2.1717);
    CriticalPlacement cp = critical_placement(dom);

    CHECK(cp.y_bar == doctest::Approx(ybar).epsilon(1e-6));
    CHECK(cp.c == doctest::Approx(2.1717 / R).epsilon(1e-8));

    auto p = meridian_point(cp.c, cp.y_bar);
    CHECK(std::abs(dom.phi(p[0], p[1])) < 1e-12);

    // K = ybar/(1+ybar^2) at unit scale = 1/R.
    CHECK(cp.K1 == doctest::Approx(cp.K2).epsilon(1e-10));
    CHECK(std::abs(cp.K1 - (cp.y_bar / (1.0 + cp.y_bar * cp.y_bar)) / cp.c) < 1e-8);
    CHECK(std::abs(cp.K1 - 1.0 / 2.1717) < 1e-8);

    // Nondegeneracy precondition ybar != 1/sqrt(2).
    CHECK(std::abs(cp.y_bar - 1.0 / std::sqrt(2.0)) > 0.5);

    CHECK(orthogonality_residual(dom, cp.c, cp.y_bar) < 1e-10);
    CHECK(orthogonality_residual(dom, cp.c, -cp.y_bar) < 1e-10);
    CHECK(orthogonality_residual(dom, cp.c, 1.3) > 1e-3);

    for (double y : {0.9, 1.2, 1.8})
        CHECK(orthogonality_residual(dom, cp.c, y) ==
              doctest::Approx(orthogonality_residual(dom, cp.c, -y)).epsilon(1e-10));

    // m1 equals the unit-chart <d_y nu, d_y Y> scaled by 1/c, cross-checked
    // by finite differences on the chart.
    double hs = 1e-5, y = cp.y_bar, c = cp.c;
    auto ny = chart_eval(c, y + hs, 0.0).normal;
    auto nm = chart_eval(c, y - hs, 0.0).normal;
    auto py = chart_eval(c, y + hs, 0.0).position;
    auto pm = chart_eval(c, y - hs, 0.0).position;
    double dot = 0.0;
    for (int k = 0; k < 3; ++k)
        dot += (ny[k] - nm[k]) / (2 * hs) * (py[k] - pm[k]) / (2 * hs);
    CHECK(cp.m1 == doctest::Approx(dot / (c * c)).epsilon(1e-8));
}

TEST_CASE("critical placement in ellipsoids against the closed-form oracle") {
    for (auto [a, b] : {std::pair{2.4, 2.0}, std::pair{2.0, 2.6}, std::pair{3.0, 3.0}}) {
        AxisymDomain dom = make_ellipsoid(a, b);
        CriticalPlacement cp = critical_placement(dom);
        auto [c_o, y_o] = ellipsoid_placement_oracle(a, b);
        CHECK(cp.c == doctest::Approx(c_o).epsilon(1e-9));
        CHECK(cp.y_bar == doctest::Approx(y_o).epsilon(1e-9));
        // Unit-scale criticality identity z2(ybar) = b^2/a^2 - 1.
        CHECK(std::abs(jacobi_fields(cp.y_bar).z2 - (b * b / (a * a) - 1.0)) < 1e-9);
        CHECK(orthogonality_residual(dom, cp.c, cp.y_bar) < 1e-10);
        CHECK(cp.K1 == doctest::Approx(cp.K2).epsilon(1e-9));
    }
}

TEST_CASE("dilation invariance of the placement") {
    AxisymDomain d1 = make_ellipsoid(2.2, 1.9);
    AxisymDomain d2 = make_ellipsoid(2.2 * 3.7, 1.9 * 3.7);
    CriticalPlacement p1 = critical_placement(d1);
    CriticalPlacement p2 = critical_placement(d2);
    CHECK(p2.y_bar == doctest::Approx(p1.y_bar).epsilon(1e-10));
    CHECK(p2.c == doctest::Approx(3.7 * p1.c).epsilon(1e-10));
    CHECK(p2.K1 * p2.c == doctest::Approx(p1.K1 * p1.c).epsilon(1e-7));
}

TEST_CASE("placement is stable under scaled variants") {
    AxisymDomain dom = make_ball(2.1717);
    CriticalPlacement base = critical_placement(dom);
    for (double f : {0.9, 1.1}) {
        AxisymDomain scaled = make_ball(2.1717 * f);
        CriticalPlacement cp = critical_placement(scaled);
        CHECK(cp.y_bar == doctest::Approx(base.y_bar).epsilon(1e-8));
        CHECK(cp.c == doctest::Approx(base.c * f).epsilon(1e-8));
    }
}

TEST_CASE("boundary curvature") {
    SUBCASE("flat test double has K = 0") {
        // Neck circle in the plane x3 = 0: an orthogonal flat crossing.
        AxisymDomain half = make_halfspace(0.0);
        BoundaryCurvature bc = boundary_curvature(half, 1.0, 0.0);
        CHECK(std::abs(bc.K) < 1e-9);
        CHECK(bc.m1 == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("ball circle reproduces 1/R") {
        AxisymDomain dom = make_ball(2.1717);
        CriticalPlacement cp = critical_placement(dom);
        BoundaryCurvature bc = boundary_curvature(dom, cp.c, cp.y_bar);
        CHECK(std::abs(bc.K - 1.0 / 2.1717) < 1e-8);
        CHECK(bc.I == bc.K);
        BoundaryCurvature bl = boundary_curvature(dom, cp.c, -cp.y_bar);
        CHECK(bl.K == doctest::Approx(bc.K).epsilon(1e-8));
    }

    SUBCASE("off-boundary point is rejected") {
        AxisymDomain dom = make_ball(2.1717);
        CHECK_THROWS_AS(boundary_curvature(dom, 1.0, 0.3), std::domain_error);
    }
}

TEST_CASE("no critical catenoid in a half space") {
    CHECK_THROWS_AS(critical_placement(make_halfspace(1.0)), NoCriticalCatenoid);
}
