#include "alc/catenoid.hpp"

#include <algorithm>
#include <cmath>

namespace alc {

namespace {

void require_scale(double c) {
    if (!(c > 0.0)) throw std::domain_error("catenoid: scale c must be positive");
}

}  // namespace

ChartPoint chart_eval(double c, double y, double theta) {
    require_scale(c);
    double s = std::sqrt(1.0 + y * y);
    double ct = std::cos(theta), st = std::sin(theta);
    ChartPoint p;
    p.position = {c * s * ct, c * s * st, c * std::asinh(y)};
    p.normal = {-ct / s, -st / s, y / s};
    p.metric = {c * c, 0.0, 0.0, c * c * (1.0 + y * y)};
    p.A_norm_sq = 2.0 / (c * c * (1.0 + y * y) * (1.0 + y * y));
    p.gauss_K = -0.5 * p.A_norm_sq;
    return p;
}

JacobiFieldPair jacobi_fields(double y) {
    double s = std::sqrt(1.0 + y * y);
    double L = std::asinh(y);
    JacobiFieldPair f;
    f.z1 = y / s;
    f.z2 = y * L / s - 1.0;
    f.dz1 = 1.0 / (s * s * s);
    f.dz2 = y / (s * s) + L / (s * s * s);
    return f;
}

double area(double c, double y_a, double y_b) {
    require_scale(c);
    auto anti = [](double y) {
        return 0.5 * (y * std::sqrt(1.0 + y * y) + std::asinh(y));
    };
    return 2.0 * M_PI * c * c * (anti(y_b) - anti(y_a));
}

double total_curvature(double c, double y_a, double y_b) {
    require_scale(c);
    auto anti = [](double y) { return y / std::sqrt(1.0 + y * y); };
    return -2.0 * M_PI * (anti(y_b) - anti(y_a));
}

std::array<double, 3> fermi_map(double c, double y, double theta, double z) {
    require_scale(c);
    if (!(std::abs(z) < c * (1.0 + y * y)))
        throw std::domain_error("fermi_map: offset beyond the focal radius");
    ChartPoint p = chart_eval(c, y, theta);
    return {p.position[0] + z * p.normal[0], p.position[1] + z * p.normal[1],
            p.position[2] + z * p.normal[2]};
}

std::array<double, 2> meridian_point(double c, double y) {
    return {c * std::sqrt(1.0 + y * y), c * std::asinh(y)};
}

std::array<double, 2> meridian_tangent(double y) {
    double s = std::sqrt(1.0 + y * y);
    return {y / s, 1.0 / s};
}

std::array<double, 2> meridian_normal(double y) {
    double s = std::sqrt(1.0 + y * y);
    return {-1.0 / s, y / s};
}

namespace {

// Newton for the foot-point equation g(y) = (q - p(y)) . p'(y) = 0 from one
// seed; returns false when the iteration leaves the invertible tube.
bool foot_newton(double c, double r, double x3, double y0, double& y_out,
                 double& z_out) {
    double y = y0;
    const double tol = 1e-14 * c * c * (1.0 + (r + std::abs(x3)) / c);
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        double s = std::sqrt(1.0 + y * y);
        double dx = r - c * s, dz = x3 - c * std::asinh(y);
        double g = (dx * y + dz) * (c / s);
        if (std::abs(g) < tol) {
            converged = true;
            break;
        }
        double zn = (-dx + dz * y) / s;
        double gp = -c * (c + zn / (1.0 + y * y));  // g' = -c m_z
        if (gp == 0.0 || !std::isfinite(gp)) return false;
        double step = g / gp;
        if (std::abs(step) > 2.0) step = (step > 0 ? 2.0 : -2.0);
        y -= step;
        if (!(std::abs(y) < 1e4)) return false;
    }
    if (!converged) return false;
    double s = std::sqrt(1.0 + y * y);
    double dx = r - c * s, dz = x3 - c * std::asinh(y);
    double z = (-dx + dz * y) / s;
    if (!(std::abs(z) < c * (1.0 + y * y))) return false;
    y_out = y;
    z_out = z;
    return true;
}

}  // namespace

MeridianFermi fermi_invert_meridian(double c, double r, double x3) {
    MeridianFermi out;
    if (!(c > 0.0) || !(r >= 0.0)) return out;

    // Seeds: vertical projection, equal-radius projection, and the neck.
    double s_vert = std::sinh(std::clamp(x3 / c, -25.0, 25.0));
    double rr = r / c;
    double s_rad = (rr > 1.0) ? std::copysign(std::sqrt(rr * rr - 1.0), x3) : 0.0;
    const double seeds[4] = {s_vert, s_rad, 0.5 * (s_vert + s_rad), 0.0};

    bool found = false;
    double best_y = 0.0, best_z = 0.0;
    for (double y0 : seeds) {
        double y, z;
        if (foot_newton(c, r, x3, y0, y, z)) {
            if (!found || std::abs(z) < std::abs(best_z)) {
                best_y = y;
                best_z = z;
                found = true;
            }
        }
    }
    if (!found) return out;
    out.y = best_y;
    out.z = best_z;
    out.ok = true;
    return out;
}

FermiPoint fermi_invert(double c, const std::array<double, 3>& position) {
    require_scale(c);
    double r = std::hypot(position[0], position[1]);
    if (r < 1e-12 * c)
        throw std::domain_error("fermi_invert: axis point, theta is ambiguous");
    MeridianFermi m = fermi_invert_meridian(c, r, position[2]);
    if (!m.ok)
        throw std::runtime_error("fermi_invert: point outside the invertible tube");
    return {m.y, std::atan2(position[1], position[0]), m.z};
}

}  // namespace alc
