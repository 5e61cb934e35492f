#pragma once

#include <functional>
#include <vector>

#include "alc/domain.hpp"
#include "alc/profile.hpp"

namespace alc {

// Fourier-mode reduction of the Jacobi operator on the unit catenoid chart:
//
//   L_m[h] = h'' + y/(1+y^2) h' + ( 2/(1+y^2)^2 - m^2/(1+y^2) ) h.
//
// Mode 0 annihilates the Jacobi fields z1, z2 exactly.
struct ModeCoeffs {
    double p;  // first-order coefficient
    double q;  // zeroth-order coefficient
};

ModeCoeffs mode_operator(int m, double y);

// Determinant of the 2x2 Robin boundary matrix built from the closed-form
// Jacobi fields,
//
//   | z1'(y1) + k1 z1(y1)   z2'(y1) + k1 z2(y1) |
//   | z1'(y2) - k2 z1(y2)   z2'(y2) - k2 z2(y2) |
//
// with chart-scaled Robin coefficients k_i = K_i * c.  Nonzero iff the
// mode-0 Robin problem is nondegenerate.
double nondeg_determinant(double y1, double y2, double K1c, double K2c);

// Robin boundary value problem on the chart interval for one Fourier mode:
//   L_m[h] = f   on (y1, y2),
//   h'(y1) + kappa1 h(y1) = g1,   h'(y2) - kappa2 h(y2) = g2.
// The boundary rows match the determinant above; in conormal form both read
// dh/dtau_in + kappa h = g with tau_in the inward chart direction.
struct RobinProblem {
    double y1;
    double y2;
    int m = 0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    std::function<double(double)> f;  // nullptr-like empty means f = 0
    double g1 = 0.0;
    double g2 = 0.0;
};

struct RobinSolution {
    std::vector<double> y;
    std::vector<double> h;
};

// Production solve: mode 0 goes through the fundamental system (z1, z2)
// with variation of parameters; higher modes use finite differences.
RobinSolution solve_robin(const RobinProblem& prob, int n = 2001);

// The two paths individually (mode-0 only for the fundamental one).
RobinSolution solve_robin_fundamental(const RobinProblem& prob, int n = 2001);
RobinSolution solve_robin_fd(const RobinProblem& prob, int n = 2001);

// Spectrum of L_m with the Robin conditions, per requested mode.  The
// discrete problem is the symmetric tridiagonal finite-volume form in the
// weighted space; every reported eigenvalue is Richardson-extrapolated from
// grids n and 2n.  Sign convention: Q(h,h) = -lambda ||h||^2, so lambda > 0
// marks an unstable direction and morse_index counts positive eigenvalues
// over the listed modes (one count per listed mode).
struct RobinSpectralReport {
    std::vector<int> modes;
    std::vector<std::vector<double>> eigenvalues;  // descending per mode
    bool nondegenerate = true;
    double min_abs_eigenvalue = 0.0;
    int morse_index = 0;
    double zero_tol = 1e-8;
};

RobinSpectralReport spectrum(double y1, double y2, double K1c, double K2c,
                             const std::vector<int>& modes, int count, int n = 400);

// Sufficient minimality certificate: if z > 0 solves the mode-0 Jacobi
// equation on [y1,y2] and kappa_i < d(log z)/dtau_out at both ends, the
// quadratic form Q is nonnegative.  margin is the worst boundary slack.
// When certified, Q is sampled on deterministic pseudo-random test
// functions as an independent validation.
struct StabilityCertificate {
    bool certified = false;
    double margin = 0.0;
};

StabilityCertificate stability_certificate(double y1, double y2, double kappa1,
                                           double kappa2,
                                           const std::function<double(double)>& z,
                                           const std::function<double(double)>& dz);

// Chart quadratic form  Q(phi,phi) = -sum_i w_i kappa_i phi(y_i)^2
//   + Integral (phi'^2 - |A|^2 phi^2) w dy,  w = sqrt(1+y^2)  (2*pi dropped).
double quadratic_form(double y1, double y2, double kappa1, double kappa2,
                      const std::function<double(double)>& phi,
                      const std::function<double(double)>& dphi);

// Main-order reduced problem for the interface displacement: mode-0 Robin
// solve with f = 0 and inward-conormal data  alpha * c1 * I * m1  at both
// circles (even placements).  h carries length units; K_bound reports
// ||h||_* / alpha.
struct ReducedDisplacement {
    RobinSolution h;
    double K_bound = 0.0;
};

ReducedDisplacement solve_reduced_h(const CriticalPlacement& placement, double alpha,
                                    const ProfileConstants& constants, int n = 1201);

}  // namespace alc
