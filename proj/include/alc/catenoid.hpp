#pragma once

#include <array>
#include <stdexcept>

namespace alc {

// Catenoid of neck radius c, charted by the signed arclength y of the unit
// profile and the rotation angle theta:
//
//   X(y,theta) = c ( sqrt(1+y^2) cos(theta), sqrt(1+y^2) sin(theta), asinh(y) )
//
// The unit normal points toward S+, the component of the complement that
// contains the x3-axis.  Unit-chart metric is diag(1, 1+y^2); the scaled
// metric carries a factor c^2.
struct ChartPoint {
    std::array<double, 3> position;
    std::array<double, 3> normal;
    std::array<double, 4> metric;  // row-major 2x2 in (y, theta)
    double A_norm_sq;              // |A|^2 = 2 / (c^2 (1+y^2)^2)
    double gauss_K;                // K = -|A|^2 / 2
};

ChartPoint chart_eval(double c, double y, double theta);

// Axisymmetric Jacobi fields of the unit catenoid (kernel of the mode-0
// operator): z1 from vertical translation (odd), z2 from dilation (even).
struct JacobiFieldPair {
    double z1;
    double z2;
    double dz1;
    double dz2;
};

JacobiFieldPair jacobi_fields(double y);

// Integral invariants between chart bounds, by closed-form antiderivatives.
double area(double c, double y_a, double y_b);
double total_curvature(double c, double y_a, double y_b);

// Fermi (normal offset) coordinates: x = X(y,theta) + z nu(y,theta); z > 0
// on the S+ side.  The map folds at the focal radius c (1+y^2).
std::array<double, 3> fermi_map(double c, double y, double theta, double z);

struct FermiPoint {
    double y;
    double theta;
    double z;
};

// Inverse of fermi_map by Newton projection onto the meridian.  Throws
// std::domain_error for axis points (theta ambiguous) and
// std::runtime_error when the point is outside the invertible tube.
FermiPoint fermi_invert(double c, const std::array<double, 3>& position);

// Non-throwing meridian-plane version for hot loops; ok=false marks points
// where the projection failed or |z| exceeds the focal guard.
struct MeridianFermi {
    double y = 0.0;
    double z = 0.0;
    bool ok = false;
};

MeridianFermi fermi_invert_meridian(double c, double r, double x3);

// Meridian helpers (2-D half-plane (r, x3) versions of the chart).
std::array<double, 2> meridian_point(double c, double y);
std::array<double, 2> meridian_tangent(double y);  // unit
std::array<double, 2> meridian_normal(double y);   // unit, toward the axis (S+)

}  // namespace alc
