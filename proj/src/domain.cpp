#include "alc/domain.hpp"

#include <cmath>

#include "alc/catenoid.hpp"

namespace alc {

double AxisymDomain::phi(double r, double x3) const {
    switch (shape) {
        case Shape::HalfSpace:
            return x3 - b;
        default:
            return r * r / (a * a) + x3 * x3 / (b * b) - 1.0;
    }
}

std::array<double, 2> AxisymDomain::grad_phi(double r, double x3) const {
    switch (shape) {
        case Shape::HalfSpace:
            return {0.0, 1.0};
        default:
            return {2.0 * r / (a * a), 2.0 * x3 / (b * b)};
    }
}

std::array<double, 2> AxisymDomain::boundary_normal(double r, double x3) const {
    auto g = grad_phi(r, x3);
    double n = std::hypot(g[0], g[1]);
    return {g[0] / n, g[1] / n};
}

std::array<double, 2> AxisymDomain::boundary_tangent(double r, double x3) const {
    auto n = boundary_normal(r, x3);
    return {-n[1], n[0]};
}

AxisymDomain make_ball(double R) {
    if (!(R > 0.0)) throw std::domain_error("make_ball: radius must be positive");
    return {AxisymDomain::Shape::Ball, R, R};
}

AxisymDomain make_ellipsoid(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("make_ellipsoid: semi-axes must be positive");
    return {AxisymDomain::Shape::Ellipsoid, a, b};
}

AxisymDomain make_halfspace(double height) {
    return {AxisymDomain::Shape::HalfSpace, 1.0, height};
}

namespace {

// Characteristic length of the container.
double domain_scale(const AxisymDomain& dom) {
    return std::max(dom.a, std::abs(dom.b));
}

// Normalized residuals of the placement system at (c, y): membership of
// c*Y(y) on the boundary and orthogonality of the meridian tangents.
std::array<double, 2> placement_residual(const AxisymDomain& dom, double c, double y) {
    auto p = meridian_point(c, y);
    auto g = dom.grad_phi(p[0], p[1]);
    double gn = std::hypot(g[0], g[1]);
    auto tc = meridian_tangent(y);
    double f1 = dom.phi(p[0], p[1]) / (gn * domain_scale(dom));
    double f2 = tc[0] * (-g[1] / gn) + tc[1] * (g[0] / gn);
    return {f1, f2};
}

// y-parameter of the boundary crossing of the Fermi line at offset z,
// near the circle parameter y0.  Newton on Phi(p(y) + z n(y)) = 0.
double boundary_graph(const AxisymDomain& dom, double c, double y0, double z) {
    double y = y0;
    for (int it = 0; it < 50; ++it) {
        auto nm = meridian_normal(y);
        auto p = meridian_point(c, y);
        double r = p[0] + z * nm[0], x3 = p[1] + z * nm[1];
        double f = dom.phi(r, x3);
        auto g = dom.grad_phi(r, x3);
        auto t = meridian_tangent(y);
        double mz = c + z / (1.0 + y * y);
        double df = (g[0] * t[0] + g[1] * t[1]) * mz;
        double gn = std::hypot(g[0], g[1]);
        if (std::abs(f) < 1e-15 * gn * domain_scale(dom)) return y;
        if (df == 0.0) break;
        y -= f / df;
    }
    auto nm = meridian_normal(y);
    auto p = meridian_point(c, y);
    double f = dom.phi(p[0] + z * nm[0], p[1] + z * nm[1]);
    auto g = dom.grad_phi(p[0] + z * nm[0], p[1] + z * nm[1]);
    if (std::abs(f) > 1e-10 * std::hypot(g[0], g[1]) * domain_scale(dom))
        throw std::runtime_error("boundary_curvature: implicit boundary solve failed");
    return y;
}

}  // namespace

BoundaryCurvature boundary_curvature(const AxisymDomain& domain, double c, double y) {
    auto p = meridian_point(c, y);
    auto g = domain.grad_phi(p[0], p[1]);
    double gn = std::hypot(g[0], g[1]);
    if (std::abs(domain.phi(p[0], p[1])) > 1e-8 * gn * domain_scale(domain))
        throw std::domain_error("boundary_curvature: point is not on the boundary");

    // Inward chart direction at this circle: sign that decreases Phi.
    auto t = meridian_tangent(y);
    double sigma_in = ((g[0] * t[0] + g[1] * t[1]) > 0.0) ? -1.0 : 1.0;

    // Arclength graph G(z) = c (y(z) - y); K = sigma_in * G''(0), Richardson
    // over steps h and h/2.
    double h = 1e-2 * c;
    auto d2 = [&](double step) {
        double yp = boundary_graph(domain, c, y, step);
        double ym = boundary_graph(domain, c, y, -step);
        return c * (yp - 2.0 * y + ym) / (step * step);
    };
    double dh = d2(h), dh2 = d2(0.5 * h);
    double K = sigma_in * (4.0 * dh2 - dh) / 3.0;

    BoundaryCurvature out;
    out.K = K;
    out.I = K;  // inward-conormal Robin coefficient; see header
    out.m1 = 1.0 / (c * (1.0 + y * y));
    return out;
}

double orthogonality_residual(const AxisymDomain& domain, double c, double y) {
    // Project the circle point onto the boundary, then compare tangents.
    auto p = meridian_point(c, y);
    double r = p[0], x3 = p[1];
    for (int it = 0; it < 8; ++it) {
        double f = domain.phi(r, x3);
        auto g = domain.grad_phi(r, x3);
        double g2 = g[0] * g[0] + g[1] * g[1];
        r -= f * g[0] / g2;
        x3 -= f * g[1] / g2;
    }
    auto tb = domain.boundary_tangent(r, x3);
    auto tc = meridian_tangent(y);
    return std::abs(tc[0] * tb[0] + tc[1] * tb[1]);
}

CriticalPlacement critical_placement(const AxisymDomain& domain) {
    if (domain.shape == AxisymDomain::Shape::HalfSpace)
        throw NoCriticalCatenoid("critical_placement: half space has no critical catenoid");

    // Initial guess: y ~ 1.5 and c from membership along that ray.
    double y = 1.5;
    double clo = 0.0, chi = domain_scale(domain);
    auto member = [&](double c) {
        auto p = meridian_point(c, y);
        return domain.phi(p[0], p[1]);
    };
    while (member(chi) < 0.0) chi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        double cm = 0.5 * (clo + chi);
        (member(cm) < 0.0 ? clo : chi) = cm;
    }
    double c = 0.5 * (clo + chi);

    // Damped Newton with a forward-difference Jacobian.
    auto norm2 = [](const std::array<double, 2>& v) {
        return std::hypot(v[0], v[1]);
    };
    auto F = [&](double cc, double yy) { return placement_residual(domain, cc, yy); };
    std::array<double, 2> f = F(c, y);
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
        if (norm2(f) < 1e-12) {
            ok = true;
            break;
        }
        double hc = 1e-7 * std::max(1.0, std::abs(c));
        double hy = 1e-7 * std::max(1.0, std::abs(y));
        auto fc = F(c + hc, y);
        auto fy = F(c, y + hy);
        double j11 = (fc[0] - f[0]) / hc, j12 = (fy[0] - f[0]) / hy;
        double j21 = (fc[1] - f[1]) / hc, j22 = (fy[1] - f[1]) / hy;
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        double dc = (-f[0] * j22 + f[1] * j12) / det;
        double dy = (-j11 * f[1] + j21 * f[0]) / det;
        double s = 1.0;
        bool stepped = false;
        for (int ls = 0; ls < 10; ++ls) {
            double cn = c + s * dc, yn = y + s * dy;
            if (cn > 0.0) {
                auto fn = F(cn, yn);
                if (norm2(fn) < norm2(f)) {
                    c = cn;
                    y = yn;
                    f = fn;
                    stepped = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if (!stepped) break;
    }
    if (!ok || !(y > 0.0))
        throw NoCriticalCatenoid("critical_placement: Newton iteration failed");

    CriticalPlacement out;
    out.c = c;
    out.y_bar = y;
    BoundaryCurvature top = boundary_curvature(domain, c, y);
    BoundaryCurvature bot = boundary_curvature(domain, c, -y);
    out.K1 = bot.K;
    out.K2 = top.K;
    out.I = top.I;
    out.m1 = top.m1;
    return out;
}

}  // namespace alc
