#include "alc/meridian_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alc/catenoid.hpp"

namespace alc {

namespace {

double blend_step(double x) {  // 1 below 0, 0 above 1
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

// Radial clustering weight at a meridian point: a flat refined plateau of
// halfwidth `width * c` around the interface with a smooth shoulder, wide
// enough to hold the layer band at every alpha of interest (the plateau is
// alpha-independent so the mapping is shared across a continuation).  The
// distance is the true normal distance where it matters; the vertical-slice
// estimate only prefilters far points (it misjudges by O(|z|/c) factors on
// the steep parts of the profile).
double radial_weight(const GridClustering& cl, double r, double z) {
    if (!cl.enabled) return 1.0;
    double u = z / cl.c;
    if (std::abs(u) > 30.0) return 1.0;
    double ch = std::cosh(u);
    double rough = std::abs(r - cl.c * ch) / ch;
    double outer = cl.width * cl.c + 0.35 * cl.c;
    if (rough > 3.0 * outer) return 1.0;
    MeridianFermi mf = fermi_invert_meridian(cl.c, r, z);
    double d = mf.ok ? std::abs(mf.z) : rough;
    return 1.0 + cl.strength * blend_step((d - cl.width * cl.c) / (0.35 * cl.c));
}

// Angular clustering weight: refined band around the boundary circles.
double angular_weight(const GridClustering& cl, double phi) {
    if (!cl.enabled) return 1.0;
    double x = (std::abs(phi) - (cl.phi_c + cl.band)) / 0.15 + 1.0;
    return 1.0 + cl.strength * blend_step(x);
}

// Inverts a cumulative table (monotone, c[0] = 0) at value v.
double invert_cum(const std::vector<double>& grid, const std::vector<double>& cum,
                  double v) {
    if (v <= 0.0) return grid.front();
    if (v >= cum.back()) return grid.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), v);
    size_t k = it - cum.begin();
    double f = (v - cum[k - 1]) / (cum[k] - cum[k - 1]);
    return grid[k - 1] + f * (grid[k] - grid[k - 1]);
}

struct RayTables {
    // phi values of the lattice eta lines and per-line radial inverters.
    std::vector<double> phi_of_lat;
};

std::vector<double> phi_lattice(const AxisymDomain& dom, const GridClustering& cl,
                                int neta) {
    int M = 8192;
    std::vector<double> phi(M + 1), cum(M + 1, 0.0);
    for (int k = 0; k <= M; ++k) phi[k] = -M_PI / 2 + M_PI * k / M;
    for (int k = 1; k <= M; ++k) {
        auto dens = [&](double p) {
            double larc = std::hypot(dom.a * std::sin(p), dom.b * std::cos(p));
            return larc * angular_weight(cl, p);
        };
        cum[k] = cum[k - 1] + 0.5 * (dens(phi[k - 1]) + dens(phi[k])) * (phi[k] - phi[k - 1]);
    }
    std::vector<double> out(2 * neta + 1);
    for (int lj = 0; lj <= 2 * neta; ++lj)
        out[lj] = invert_cum(phi, cum, cum.back() * lj / (2.0 * neta));
    return out;
}

std::vector<double> s_lattice(const AxisymDomain& dom, const GridClustering& cl,
                              double phi, int nxi) {
    double dir_r = dom.a * std::cos(phi), dir_z = dom.b * std::sin(phi);
    int M = 512;
    std::vector<double> s(M + 1), cum(M + 1, 0.0);
    for (int k = 0; k <= M; ++k) s[k] = static_cast<double>(k) / M;
    for (int k = 1; k <= M; ++k) {
        auto dens = [&](double ss) { return radial_weight(cl, ss * dir_r, ss * dir_z); };
        cum[k] = cum[k - 1] + 0.5 * (dens(s[k - 1]) + dens(s[k])) * (s[k] - s[k - 1]);
    }
    std::vector<double> out(2 * nxi + 1);
    for (int li = 0; li <= 2 * nxi; ++li)
        out[li] = invert_cum(s, cum, cum.back() * li / (2.0 * nxi));
    return out;
}

}  // namespace

std::array<int, 2> grid_resolution(const AxisymDomain& domain,
                                   const GridClustering& clustering,
                                   double fine_spacing) {
    // 25% margin over the nominal target absorbs the slack between the
    // sampled sizing integrals and the realized lattice spacings across
    // container shapes.
    fine_spacing /= 1.25;
    double peak = clustering.enabled ? 1.0 + clustering.strength : 1.0;

    // Radial requirement per sampled ray.
    int n_xi = 0;
    for (int k = 0; k <= 64; ++k) {
        double phi = -M_PI / 2 + M_PI * k / 64.0;
        double dir_r = domain.a * std::cos(phi), dir_z = domain.b * std::sin(phi);
        double L = std::hypot(dir_r, dir_z);
        int M = 512;
        double tot = 0.0;
        for (int m = 1; m <= M; ++m) {
            double s0 = static_cast<double>(m - 1) / M, s1 = static_cast<double>(m) / M;
            tot += 0.5 *
                   (radial_weight(clustering, s0 * dir_r, s0 * dir_z) +
                    radial_weight(clustering, s1 * dir_r, s1 * dir_z)) *
                   (s1 - s0);
        }
        n_xi = std::max(n_xi, static_cast<int>(std::ceil(L * tot / (peak * fine_spacing))));
    }

    // Angular requirement.
    int M = 2048;
    double tot = 0.0;
    for (int m = 1; m <= M; ++m) {
        double p0 = -M_PI / 2 + M_PI * (m - 1) / M, p1 = -M_PI / 2 + M_PI * m / M;
        auto dens = [&](double p) {
            return std::hypot(domain.a * std::sin(p), domain.b * std::cos(p)) *
                   angular_weight(clustering, p);
        };
        tot += 0.5 * (dens(p0) + dens(p1)) * (p1 - p0);
    }
    int n_eta = static_cast<int>(std::ceil(tot / (peak * fine_spacing)));
    return {std::max(n_xi, 24), std::max(n_eta, 48)};
}

MeridianGrid build_grid(const AxisymDomain& domain, int n) {
    if (n < 32) throw std::domain_error("build_grid: resolution must be >= 32");
    GridClustering none;
    return build_grid(domain, n, 2 * n, none);
}

MeridianGrid build_grid(const AxisymDomain& domain, int nxi, int neta,
                        const GridClustering& clustering) {
    if (domain.shape == AxisymDomain::Shape::HalfSpace)
        throw std::domain_error("build_grid: bounded domains only");
    if (nxi < 8 || neta < 8) throw std::domain_error("build_grid: grid too coarse");

    MeridianGrid g;
    g.domain = domain;
    g.nxi = nxi;
    g.neta = neta;
    g.dxi = 1.0 / nxi;
    g.deta = 1.0 / neta;

    int LR = 2 * nxi + 1, LC = 2 * neta + 1;
    g.latR.assign(static_cast<size_t>(LR) * LC, 0.0);
    g.latZ.assign(static_cast<size_t>(LR) * LC, 0.0);

    std::vector<double> phis = phi_lattice(domain, clustering, neta);
    for (int lj = 0; lj < LC; ++lj) {
        double phi = phis[lj];
        double dir_r = domain.a * std::cos(phi), dir_z = domain.b * std::sin(phi);
        std::vector<double> ss = s_lattice(domain, clustering, phi, nxi);
        for (int li = 0; li < LR; ++li) {
            g.latR[g.lat_idx(li, lj)] = ss[li] * dir_r;
            g.latZ[g.lat_idx(li, lj)] = ss[li] * dir_z;
        }
    }

    auto metr = [&](int li, int lj, double& rxi, double& zxi, double& reta, double& zeta) {
        rxi = (g.latR[g.lat_idx(li + 1, lj)] - g.latR[g.lat_idx(li - 1, lj)]) / g.dxi;
        zxi = (g.latZ[g.lat_idx(li + 1, lj)] - g.latZ[g.lat_idx(li - 1, lj)]) / g.dxi;
        reta = (g.latR[g.lat_idx(li, lj + 1)] - g.latR[g.lat_idx(li, lj - 1)]) / g.deta;
        zeta = (g.latZ[g.lat_idx(li, lj + 1)] - g.latZ[g.lat_idx(li, lj - 1)]) / g.deta;
    };

    g.cr.resize(g.cells());
    g.cz.resize(g.cells());
    g.vol.resize(g.cells());
    g.weight.resize(g.cells());
    g.mask.assign(g.cells(), 0);
    for (int j = 0; j < neta; ++j) {
        for (int i = 0; i < nxi; ++i) {
            int li = 2 * i + 1, lj = 2 * j + 1;
            double rxi, zxi, reta, zeta;
            metr(li, lj, rxi, zxi, reta, zeta);
            double J = rxi * zeta - reta * zxi;
            double r = g.latR[g.lat_idx(li, lj)];
            g.cr[g.idx(i, j)] = r;
            g.cz[g.idx(i, j)] = g.latZ[g.lat_idx(li, lj)];
            g.vol[g.idx(i, j)] = r * J * g.dxi * g.deta;
            g.weight[g.idx(i, j)] = 2.0 * M_PI * g.vol[g.idx(i, j)];
            if (i == nxi - 1) g.mask[g.idx(i, j)] |= MeridianGrid::kBoundary;
            if (i == 0 || j == 0 || j == neta - 1) g.mask[g.idx(i, j)] |= MeridianGrid::kAxis;
            if (!(g.vol[g.idx(i, j)] > 0.0))
                throw std::runtime_error("build_grid: degenerate mapping jacobian");
        }
    }

    // xi-face coefficients (interior faces only; i = 0 and nxi carry zero flux).
    g.fx_c.assign(static_cast<size_t>(nxi + 1) * neta, 0.0);
    g.fx_b.assign(static_cast<size_t>(nxi + 1) * neta, 0.0);
    for (int j = 0; j < neta; ++j) {
        for (int i = 1; i < nxi; ++i) {
            int li = 2 * i, lj = 2 * j + 1;
            double rxi, zxi, reta, zeta;
            metr(li, lj, rxi, zxi, reta, zeta);
            double J = rxi * zeta - reta * zxi;
            double r = g.latR[g.lat_idx(li, lj)];
            double cm = reta * reta + zeta * zeta;
            double bm = rxi * reta + zxi * zeta;
            g.fx_c[g.fx_idx(i, j)] = r * cm / J * g.deta / g.dxi;
            g.fx_b[g.fx_idx(i, j)] = -r * bm / J * g.deta;
        }
    }
    // eta-face coefficients (j = 0 and neta are on the axis: zero flux).
    g.fy_c.assign(static_cast<size_t>(nxi) * (neta + 1), 0.0);
    g.fy_b.assign(static_cast<size_t>(nxi) * (neta + 1), 0.0);
    for (int j = 1; j < neta; ++j) {
        for (int i = 0; i < nxi; ++i) {
            int li = 2 * i + 1, lj = 2 * j;
            double rxi, zxi, reta, zeta;
            metr(li, lj, rxi, zxi, reta, zeta);
            double J = rxi * zeta - reta * zxi;
            double r = g.latR[g.lat_idx(li, lj)];
            double am = rxi * rxi + zxi * zxi;
            double bm = rxi * reta + zxi * zeta;
            g.fy_c[g.fy_idx(i, j)] = r * am / J * g.dxi / g.deta;
            g.fy_b[g.fy_idx(i, j)] = -r * bm / J * g.dxi;
        }
    }

    g.boundary_normal.resize(neta);
    for (int j = 0; j < neta; ++j) {
        int li = 2 * nxi, lj = 2 * j + 1;
        g.boundary_normal[j] =
            domain.boundary_normal(g.latR[g.lat_idx(li, lj)], g.latZ[g.lat_idx(li, lj)]);
    }
    return g;
}

std::vector<double> apply_laplacian(const MeridianGrid& g, const std::vector<double>& u) {
    std::vector<double> out = flux_divergence(g, u);
    for (int k = 0; k < g.cells(); ++k) out[k] /= g.vol[k];
    return out;
}

std::vector<double> flux_divergence(const MeridianGrid& g, const std::vector<double>& u) {
    if (static_cast<int>(u.size()) != g.cells())
        throw std::domain_error("flux_divergence: field size mismatch");
    int nxi = g.nxi, neta = g.neta;
    std::vector<double> out(g.cells(), 0.0);

    auto ueta_face_x = [&](int i, int j) {
        // d_eta u averaged on the xi-face between cells (i-1,j),(i,j).
        if (j == 0)
            return (u[g.idx(i - 1, 1)] + u[g.idx(i, 1)] - u[g.idx(i - 1, 0)] -
                    u[g.idx(i, 0)]) /
                   (2.0 * g.deta);
        if (j == neta - 1)
            return (u[g.idx(i - 1, j)] + u[g.idx(i, j)] - u[g.idx(i - 1, j - 1)] -
                    u[g.idx(i, j - 1)]) /
                   (2.0 * g.deta);
        return (u[g.idx(i - 1, j + 1)] + u[g.idx(i, j + 1)] - u[g.idx(i - 1, j - 1)] -
                u[g.idx(i, j - 1)]) /
               (4.0 * g.deta);
    };
    auto uxi_face_y = [&](int i, int j) {
        if (i == 0)
            return (u[g.idx(1, j - 1)] + u[g.idx(1, j)] - u[g.idx(0, j - 1)] -
                    u[g.idx(0, j)]) /
                   (2.0 * g.dxi);
        if (i == nxi - 1)
            return (u[g.idx(i, j - 1)] + u[g.idx(i, j)] - u[g.idx(i - 1, j - 1)] -
                    u[g.idx(i - 1, j)]) /
                   (2.0 * g.dxi);
        return (u[g.idx(i + 1, j - 1)] + u[g.idx(i + 1, j)] - u[g.idx(i - 1, j - 1)] -
                u[g.idx(i - 1, j)]) /
               (4.0 * g.dxi);
    };

    for (int j = 0; j < neta; ++j) {
        for (int i = 0; i < nxi; ++i) {
            double div = 0.0;
            if (i + 1 <= nxi - 1) {
                div += g.fx_c[g.fx_idx(i + 1, j)] * (u[g.idx(i + 1, j)] - u[g.idx(i, j)]) +
                       g.fx_b[g.fx_idx(i + 1, j)] * ueta_face_x(i + 1, j);
            }
            if (i >= 1) {
                div -= g.fx_c[g.fx_idx(i, j)] * (u[g.idx(i, j)] - u[g.idx(i - 1, j)]) +
                       g.fx_b[g.fx_idx(i, j)] * ueta_face_x(i, j);
            }
            if (j + 1 <= neta - 1) {
                div += g.fy_c[g.fy_idx(i, j + 1)] * (u[g.idx(i, j + 1)] - u[g.idx(i, j)]) +
                       g.fy_b[g.fy_idx(i, j + 1)] * uxi_face_y(i, j + 1);
            }
            if (j >= 1) {
                div -= g.fy_c[g.fy_idx(i, j)] * (u[g.idx(i, j)] - u[g.idx(i, j - 1)]) +
                       g.fy_b[g.fy_idx(i, j)] * uxi_face_y(i, j);
            }
            out[g.idx(i, j)] = div;
        }
    }
    return out;
}

}  // namespace alc
