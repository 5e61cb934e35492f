#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "alc/domain.hpp"

namespace alc {

// Boundary-fitted, cell-centered finite-volume grid on the meridian domain
// {Phi < 0, r >= 0}.  The mapping is elliptic-polar,
//
//   (xi, eta) in [0,1]^2  ->  (r, x3) = s(xi, eta) * (a cos phi(eta), b sin phi(eta)),
//
// optionally with smooth grid-line clustering toward a placed catenoid and
// the boundary circles.  All closures are natural zero-flux faces: the
// outer boundary carries the homogeneous Neumann condition, and the axis
// (eta extremes, r = 0) and the polar center (xi = 0) degenerate to
// zero-measure faces, which is the standard axisymmetric regularity
// closure.  Metric coefficients are taken from centered differences of the
// lattice coordinates, so any smooth mapping yields a second-order scheme.
struct GridClustering {
    bool enabled = false;
    double c = 1.0;       // catenoid scale
    double strength = 4.0;
    double width = 0.60;  // refined-plateau halfwidth (times c) at the interface
    double phi_c = 0.0;   // circle angle in the (a cos, b sin) parameter
    double band = 0.35;   // angular half-band refined around the circles
};

struct MeridianGrid {
    AxisymDomain domain;
    int nxi = 0, neta = 0;
    double dxi = 0.0, deta = 0.0;

    // Lattice coordinates, (2 nxi + 1) x (2 neta + 1), row-major in the
    // lattice xi index.
    std::vector<double> latR, latZ;
    int lat_idx(int li, int lj) const { return lj * (2 * nxi + 1) + li; }

    // Cell-centered data.
    std::vector<double> cr, cz;      // centers
    std::vector<double> vol;         // r J dxi deta (no 2*pi)
    std::vector<double> weight;      // quadrature weights 2*pi*vol
    std::vector<std::uint8_t> mask;  // bit flags
    static constexpr std::uint8_t kBoundary = 1;  // touches the outer wall
    static constexpr std::uint8_t kAxis = 2;      // touches the axis/center

    // Outward boundary normals for the outer-wall cells (i = nxi-1).
    std::vector<std::array<double, 2>> boundary_normal;  // size neta

    // Face coefficients for the conservative flux stencil.
    // xi-faces: (nxi+1) x neta; eta-faces: nxi x (neta+1).
    std::vector<double> fx_c, fx_b;  // gradient and cross multipliers
    std::vector<double> fy_c, fy_b;

    int idx(int i, int j) const { return j * nxi + i; }
    int fx_idx(int i, int j) const { return j * (nxi + 1) + i; }
    int fy_idx(int i, int j) const { return j * nxi + i; }

    int cells() const { return nxi * neta; }
};

// Uniform grid with nxi = n, neta = 2n.  pre: n >= 32.
MeridianGrid build_grid(const AxisymDomain& domain, int n);

// Clustered grid with explicit cell counts.
MeridianGrid build_grid(const AxisymDomain& domain, int nxi, int neta,
                        const GridClustering& clustering);

// Cell counts delivering fine spacing <= target in the clustered zones.
std::array<int, 2> grid_resolution(const AxisymDomain& domain,
                                   const GridClustering& clustering,
                                   double fine_spacing);

// Conservative flux divergence (volume-scaled Laplacian); computed from
// differences of u, so constants are annihilated exactly.
std::vector<double> flux_divergence(const MeridianGrid& grid,
                                    const std::vector<double>& u);

// Discrete axisymmetric Laplacian (flux divergence over cell volume).
std::vector<double> apply_laplacian(const MeridianGrid& grid,
                                    const std::vector<double>& u);

}  // namespace alc
