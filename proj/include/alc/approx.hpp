#pragma once

#include <cstdint>
#include <vector>

#include "alc/domain.hpp"
#include "alc/profile.hpp"

namespace alc {

// Recipe for the assembled phase-field approximation
//
//   U = w((z - h(y))/alpha) + alpha^2 |A(y)|^2 psi1((z - h(y))/alpha)
//
// inside the Fermi tube of the placed catenoid, interpolated to the exact
// phases +-1 outside through a quintic smoothstep in |z|.  h is the mode-0
// interface displacement sampled on [-y_bar, y_bar] (length units; empty
// means h = 0).
struct ApproximationSpec {
    double alpha = 0.1;
    CriticalPlacement placement;
    std::vector<double> h_y;
    std::vector<double> h_vals;
    bool with_psi1 = true;
    double eta = 0.0;    // defaults to 0.5 c when zero
    double delta = 0.0;  // defaults to 0.25 c when zero
    double sigma = 1.0;  // weight rate for the weighted residual norms
};

class Approximation {
  public:
    Approximation(const ApproximationSpec& spec, const Psi1Correction& psi);

    double value_meridian(double r, double x3) const;
    double value(double x, double y, double z) const;  // 3-D spot checks

    // Analytic meridian gradient (dU/dr, dU/dx3).
    std::array<double, 2> gradient_meridian(double r, double x3) const;

    // Exact residual alpha^2 Laplacian(U) + U - U^3 computed through the
    // Fermi chart; valid in the tube core where the cutoff is inactive
    // (in_core).  Outside the tube U is exactly +-1 and S vanishes; the
    // smoothstep seam is not covered by this path.
    struct TubeResidual {
        double S = 0.0;
        bool in_core = false;
    };
    TubeResidual residual_fermi(double r, double x3) const;

    // Fermi classification of a meridian point against the placed catenoid.
    struct Location {
        bool in_tube = false;  // invertible and |z| < tau(y)
        bool in_core = false;  // |z| <= 0.49 tau(y): cutoff inactive
        double y = 0.0;
        double z = 0.0;
        double t = 0.0;  // layer coordinate (z - h)/alpha
    };
    Location locate(double r, double x3) const;

    double heaviside(double r, double x3) const;  // +-1 by S+- membership
    double tube_halfwidth(double y) const;        // tau(y)

    const ApproximationSpec& spec() const { return spec_; }

    double h_at(double y) const;
    double dh_at(double y) const;
    double d2h_at(double y) const;

  private:
    ApproximationSpec spec_;
    Psi1Correction psi_;
    double eta_, delta_;
    bool has_h_ = false;
    double hy0_ = 0.0, hstep_ = 1.0;
    std::vector<double> hval_, hmom_;  // natural cubic spline data

    double dtau(double y) const;
    double a2(double y) const;
    double da2(double y) const;
    double d2a2(double y) const;
};

Approximation build_approximation(const ApproximationSpec& spec,
                                  const Psi1Correction& psi);

// Scalar field sampled on a uniform meridian lattice.
struct MeridianField {
    double r0 = 0.0, x30 = 0.0;
    double dr = 0.0, dx3 = 0.0;
    int nr = 0, nx3 = 0;
    std::vector<double> value;                 // nr * nx3, row-major in r
    std::vector<std::uint8_t> mask;            // bit flags below
    static constexpr std::uint8_t kInside = 1;  // inside Omega
    static constexpr std::uint8_t kCore = 2;    // tube core, collar cleared

    int idx(int i, int j) const { return j * nr + i; }
};

// Residual S(U) = alpha^2 Laplacian(U) + U - U^3 with the axisymmetric
// five-point Laplacian (1/r d_r term, even closure at r = 0) on a lattice
// of the given spacing covering Omega.  Refuses spacing > alpha/8.
MeridianField residual_field(const Approximation& U, const AxisymDomain& domain,
                             double spacing);

struct ResidualReport {
    double interior_sup = 0.0;        // Richardson-combined FD sup on the core mask
    double interior_sup_raw = 0.0;    // single-grid FD sup
    double interior_sup_fermi = 0.0;  // exact chart residual sup
    double weighted_sup = 0.0;        // sup of e^{sigma |t|} |S|
    double boundary_neumann_sup = 0.0;  // sup |dU/dn| on the boundary
    double robin_defect = 0.0;  // |<dU/dn, w'>_t| / c0 at the worst circle
    double fermi_crosscheck_max = 0.0;  // max |S_fd - S_fermi| at probes
    double collar_width = 0.0;
    int core_nodes = 0;
};

ResidualReport residual_report(const Approximation& U, const AxisymDomain& domain,
                               double spacing);

struct ResidualOrders {
    std::vector<double> alphas;
    std::vector<double> interior_sup;
    std::vector<double> interior_sup_fermi;
    std::vector<double> boundary_sup;
    std::vector<double> robin_defect;
    double slope_interior = 0.0;
    double slope_interior_fermi = 0.0;
    double slope_boundary = 0.0;
    double slope_defect = 0.0;
    bool monotone = true;
};

// Convergence-order study over a descending alpha list: two lattices per
// alpha (spacings alpha*sqrt(2)/ppl and half that) separate the
// discretization error from the modeling error by Richardson combination.
ResidualOrders residual_orders(const AxisymDomain& domain,
                               const CriticalPlacement& placement,
                               const Psi1Correction& psi,
                               const ProfileConstants& constants,
                               const std::vector<double>& alphas, bool with_psi1,
                               bool with_reduced_h, int ppl = 12, double sigma = 1.0);

}  // namespace alc
