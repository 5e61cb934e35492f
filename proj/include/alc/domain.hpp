#pragma once

#include <array>
#include <stdexcept>

namespace alc {

// Axisymmetric container described by a meridian level set Phi(r, x3):
// Phi < 0 inside, Phi = 0 on the boundary.  Ball and ellipsoid of
// revolution are the production shapes; the half space {x3 < height} is a
// flat-boundary test double.
struct AxisymDomain {
    enum class Shape { Ball, Ellipsoid, HalfSpace };

    Shape shape = Shape::Ball;
    double a = 1.0;  // equatorial semi-axis
    double b = 1.0;  // polar semi-axis (HalfSpace: boundary height)

    double phi(double r, double x3) const;
    std::array<double, 2> grad_phi(double r, double x3) const;
    bool inside(double r, double x3) const { return phi(r, x3) < 0.0; }

    // Outward unit normal and unit tangent of the boundary meridian curve.
    std::array<double, 2> boundary_normal(double r, double x3) const;
    std::array<double, 2> boundary_tangent(double r, double x3) const;
};

AxisymDomain make_ball(double R);
AxisymDomain make_ellipsoid(double a, double b);
AxisymDomain make_halfspace(double height);

struct NoCriticalCatenoid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Catenoid placed critically in the container: the circles c*Y(+-y_bar) lie
// on the boundary and the surface meets it orthogonally.  K1, K2 are the
// geodesic curvatures of the boundary in the nu direction at the two
// circles; I is the Robin coefficient of the inward-conormal boundary
// operator dh/dtau + I h (equal to K for the even placements built here);
// m1 is the meridian second-fundamental coefficient <d_rho nu, d_rho gamma>
// in arclength normalization.
struct CriticalPlacement {
    double c = 1.0;
    double y_bar = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    double I = 0.0;
    double m1 = 0.0;
};

// Solves the two-unknown system (membership, orthogonality) for (c, y_bar)
// by damped Newton with a numeric Jacobian, then fills the boundary data.
// Throws NoCriticalCatenoid when the iteration fails.
CriticalPlacement critical_placement(const AxisymDomain& domain);

struct BoundaryCurvature {
    double K;   // geodesic curvature of the boundary toward nu
    double I;   // Robin coefficient, inward conormal convention
    double m1;  // meridian curvature of the catenoid at the circle
};

// Curvature data at the circle with chart parameter y (the point c*Y(y)
// must lie on the boundary).  K is obtained from two Richardson-extrapolated
// central differences of the implicitly defined boundary graph G(z) along
// the Fermi normal line.
BoundaryCurvature boundary_curvature(const AxisymDomain& domain, double c, double y);

// |< catenoid meridian tangent, boundary meridian tangent >| at the nearest
// boundary point; zero iff the intersection is orthogonal.
double orthogonality_residual(const AxisymDomain& domain, double c, double y);

}  // namespace alc
