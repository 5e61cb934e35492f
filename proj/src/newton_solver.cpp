#include "alc/newton_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "alc/catenoid.hpp"
#include "alc/jacobi.hpp"

namespace alc {

namespace {

// Flux divergence as a sparse matrix (constant part of the Jacobian) and a
// matching residual evaluator would duplicate the stencil; assemble both
// from one triplet walk instead.
struct Stencil {
    std::vector<Eigen::Triplet<double>> trips;
    void add(int row, int col, double v) { trips.emplace_back(row, col, v); }
};

void assemble_flux(const MeridianGrid& g, Stencil& st) {
    int nxi = g.nxi, neta = g.neta;
    auto add_cross_x = [&](int face_i, int j, int row, double coef) {
        // cross term on a xi-face: coef * d_eta u (averaged)
        int il = face_i - 1, ir = face_i;
        if (j == 0) {
            double c = coef / (2.0 * g.deta);
            st.add(row, g.idx(il, 1), c);
            st.add(row, g.idx(ir, 1), c);
            st.add(row, g.idx(il, 0), -c);
            st.add(row, g.idx(ir, 0), -c);
        } else if (j == neta - 1) {
            double c = coef / (2.0 * g.deta);
            st.add(row, g.idx(il, j), c);
            st.add(row, g.idx(ir, j), c);
            st.add(row, g.idx(il, j - 1), -c);
            st.add(row, g.idx(ir, j - 1), -c);
        } else {
            double c = coef / (4.0 * g.deta);
            st.add(row, g.idx(il, j + 1), c);
            st.add(row, g.idx(ir, j + 1), c);
            st.add(row, g.idx(il, j - 1), -c);
            st.add(row, g.idx(ir, j - 1), -c);
        }
    };
    auto add_cross_y = [&](int i, int face_j, int row, double coef) {
        int jb = face_j - 1, jt = face_j;
        if (i == 0) {
            double c = coef / (2.0 * g.dxi);
            st.add(row, g.idx(1, jb), c);
            st.add(row, g.idx(1, jt), c);
            st.add(row, g.idx(0, jb), -c);
            st.add(row, g.idx(0, jt), -c);
        } else if (i == nxi - 1) {
            double c = coef / (2.0 * g.dxi);
            st.add(row, g.idx(i, jb), c);
            st.add(row, g.idx(i, jt), c);
            st.add(row, g.idx(i - 1, jb), -c);
            st.add(row, g.idx(i - 1, jt), -c);
        } else {
            double c = coef / (4.0 * g.dxi);
            st.add(row, g.idx(i + 1, jb), c);
            st.add(row, g.idx(i + 1, jt), c);
            st.add(row, g.idx(i - 1, jb), -c);
            st.add(row, g.idx(i - 1, jt), -c);
        }
    };

    for (int j = 0; j < neta; ++j) {
        for (int i = 0; i < nxi; ++i) {
            int row = g.idx(i, j);
            if (i + 1 <= nxi - 1) {
                double c = g.fx_c[g.fx_idx(i + 1, j)];
                st.add(row, g.idx(i + 1, j), c);
                st.add(row, g.idx(i, j), -c);
                add_cross_x(i + 1, j, row, g.fx_b[g.fx_idx(i + 1, j)]);
            }
            if (i >= 1) {
                double c = g.fx_c[g.fx_idx(i, j)];
                st.add(row, g.idx(i, j), -c);
                st.add(row, g.idx(i - 1, j), c);
                add_cross_x(i, j, row, -g.fx_b[g.fx_idx(i, j)]);
            }
            if (j + 1 <= neta - 1) {
                double c = g.fy_c[g.fy_idx(i, j + 1)];
                st.add(row, g.idx(i, j + 1), c);
                st.add(row, g.idx(i, j), -c);
                add_cross_y(i, j + 1, row, g.fy_b[g.fy_idx(i, j + 1)]);
            }
            if (j >= 1) {
                double c = g.fy_c[g.fy_idx(i, j)];
                st.add(row, g.idx(i, j), -c);
                st.add(row, g.idx(i, j - 1), c);
                add_cross_y(i, j, row, -g.fy_b[g.fy_idx(i, j)]);
            }
        }
    }
}

void check_layer_resolution(const MeridianGrid& g, double alpha,
                            const std::vector<double>& initial) {
    // Only meaningful when the field actually carries a layer.
    bool has_layer = false;
    for (double v : initial)
        if (std::abs(v) < 0.5) has_layer = true;
    if (!has_layer) return;

    double limit = alpha * std::sqrt(2.0) / 8.0 * 1.05;
    for (int j = 0; j < g.neta; ++j) {
        for (int i = 0; i < g.nxi; ++i) {
            double v = initial[g.idx(i, j)];
            if (std::abs(v) > 0.9) continue;  // outside the layer band
            // Cell edge vectors from the lattice.
            int li = 2 * i + 1, lj = 2 * j + 1;
            double exr = g.latR[g.lat_idx(li + 1, lj)] - g.latR[g.lat_idx(li - 1, lj)];
            double exz = g.latZ[g.lat_idx(li + 1, lj)] - g.latZ[g.lat_idx(li - 1, lj)];
            double eyr = g.latR[g.lat_idx(li, lj + 1)] - g.latR[g.lat_idx(li, lj - 1)];
            double eyz = g.latZ[g.lat_idx(li, lj + 1)] - g.latZ[g.lat_idx(li, lj - 1)];
            // Layer normal from the discrete gradient of the field itself.
            double uxi = 0.0, ueta = 0.0;
            if (i > 0 && i + 1 < g.nxi)
                uxi = (initial[g.idx(i + 1, j)] - initial[g.idx(i - 1, j)]) / 2.0;
            if (j > 0 && j + 1 < g.neta)
                ueta = (initial[g.idx(i, j + 1)] - initial[g.idx(i, j - 1)]) / 2.0;
            double J = exr * eyz - eyr * exz;
            if (J == 0.0) continue;
            double gr = (uxi * eyz - ueta * exz) / J;
            double gz = (ueta * exr - uxi * eyr) / J;
            double gn = std::hypot(gr, gz);
            if (gn < 1e-12) continue;
            double nr = gr / gn, nz = gz / gn;
            double proj_x = std::abs(exr * nr + exz * nz);
            double proj_y = std::abs(eyr * nr + eyz * nz);
            if (proj_x > limit || proj_y > limit)
                throw std::invalid_argument(
                    "newton_solve: layer under-resolved; need >= 8 cells per width "
                    "alpha*sqrt(2) = " +
                    std::to_string(alpha * std::sqrt(2.0)) + " (cell normal spacing " +
                    std::to_string(std::max(proj_x, proj_y)) + ")");
        }
    }
}

}  // namespace

std::pair<std::vector<double>, SolveReport> newton_solve(const MeridianGrid& grid,
                                                         double alpha,
                                                         const std::vector<double>& initial,
                                                         const NewtonOptions& opts) {
    int n = grid.cells();
    if (static_cast<int>(initial.size()) != n)
        throw std::domain_error("newton_solve: field size mismatch");
    if (!(alpha > 0.0)) throw std::domain_error("newton_solve: alpha must be positive");
    check_layer_resolution(grid, alpha, initial);

    Stencil st;
    assemble_flux(grid, st);
    Eigen::SparseMatrix<double> flux(n, n);
    flux.setFromTriplets(st.trips.begin(), st.trips.end());

    std::vector<double> u = initial;
    auto residual = [&](const std::vector<double>& v, Eigen::VectorXd& R) {
        // Difference-first fluxes: constants are annihilated exactly.
        std::vector<double> div = flux_divergence(grid, v);
        R.resize(n);
        for (int k = 0; k < n; ++k)
            R[k] = alpha * alpha * div[k] + grid.vol[k] * (v[k] - v[k] * v[k] * v[k]);
    };
    auto norms = [&](const Eigen::VectorXd& R, double& nmax, double& n2) {
        nmax = 0.0;
        n2 = 0.0;
        for (int k = 0; k < n; ++k) {
            double p = std::abs(R[k]) / grid.vol[k];
            nmax = std::max(nmax, p);
            n2 += p * p;
        }
        n2 = std::sqrt(n2 / n);
    };

    SolveReport rep;
    rep.alpha = alpha;
    Eigen::VectorXd R(n);
    residual(u, R);
    double nmax, n2;
    norms(R, nmax, n2);
    rep.residual_history.push_back(nmax);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;

    int it = 0;
    while (nmax > opts.tol && it < opts.max_iter) {
        // Jacobian rows equilibrated by the cell volumes, so the linear
        // solve's backward error lands on the pointwise-residual scale.
        Eigen::SparseMatrix<double> Jm = alpha * alpha * flux;
        Eigen::VectorXd diag(n);
        for (int k = 0; k < n; ++k) diag[k] = grid.vol[k] * (1.0 - 3.0 * u[k] * u[k]);
        Eigen::SparseMatrix<double> D(n, n);
        std::vector<Eigen::Triplet<double>> dt;
        dt.reserve(n);
        for (int k = 0; k < n; ++k) dt.emplace_back(k, k, diag[k]);
        D.setFromTriplets(dt.begin(), dt.end());
        Jm += D;
        Eigen::VectorXd vinv(n);
        for (int k = 0; k < n; ++k) vinv[k] = 1.0 / grid.vol[k];
        Jm = vinv.asDiagonal() * Jm;
        Jm.makeCompressed();
        if (!analyzed) {
            lu.analyzePattern(Jm);
            analyzed = true;
        }
        lu.factorize(Jm);
        if (lu.info() != Eigen::Success)
            throw NewtonError("newton_solve: singular jacobian", rep);
        Eigen::VectorXd rhs = -(vinv.asDiagonal() * R);
        Eigen::VectorXd delta = lu.solve(rhs);
        // One step of iterative refinement.
        Eigen::VectorXd lin_res = Jm * delta - rhs;
        delta -= lu.solve(lin_res);

        double s = 1.0;
        bool accepted = false;
        std::vector<double> unew(n);
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            for (int k = 0; k < n; ++k) unew[k] = u[k] + s * delta[k];
            Eigen::VectorXd Rn(n);
            residual(unew, Rn);
            double mmax, m2;
            norms(Rn, mmax, m2);
            if (m2 < n2 * (1.0 - 1e-4 * s) || mmax < opts.tol) {
                u.swap(unew);
                R.swap(Rn);
                nmax = mmax;
                n2 = m2;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        ++it;
        rep.residual_history.push_back(nmax);
        if (!accepted) {
            rep.iterations = it;
            rep.final_residual = nmax;
            throw NewtonError("newton_solve: line search stagnated", rep);
        }
    }

    rep.iterations = it;
    rep.final_residual = nmax;
    rep.converged = nmax <= opts.tol;
    if (!rep.converged) throw NewtonError("newton_solve: iteration limit reached", rep);

    rep.energy = energy(grid, u, alpha);
    double sup = 0.0;
    for (int k = 0; k < n; ++k) sup = std::max(sup, std::abs(u[k] - initial[k]));
    rep.sup_distance_to_initial = sup;
    return {std::move(u), rep};
}

namespace {

void cell_gradient(const MeridianGrid& g, const std::vector<double>& u, int i, int j,
                   double& ur, double& uz) {
    int nxi = g.nxi, neta = g.neta;
    double uxi, ueta;
    if (i == 0)
        uxi = (u[g.idx(1, j)] - u[g.idx(0, j)]) / g.dxi;
    else if (i == nxi - 1)
        uxi = (u[g.idx(i, j)] - u[g.idx(i - 1, j)]) / g.dxi;
    else
        uxi = (u[g.idx(i + 1, j)] - u[g.idx(i - 1, j)]) / (2.0 * g.dxi);
    if (j == 0)
        ueta = (u[g.idx(i, 1)] - u[g.idx(i, 0)]) / g.deta;
    else if (j == neta - 1)
        ueta = (u[g.idx(i, j)] - u[g.idx(i, j - 1)]) / g.deta;
    else
        ueta = (u[g.idx(i, j + 1)] - u[g.idx(i, j - 1)]) / (2.0 * g.deta);

    int li = 2 * i + 1, lj = 2 * j + 1;
    double rxi = (g.latR[g.lat_idx(li + 1, lj)] - g.latR[g.lat_idx(li - 1, lj)]) / g.dxi;
    double zxi = (g.latZ[g.lat_idx(li + 1, lj)] - g.latZ[g.lat_idx(li - 1, lj)]) / g.dxi;
    double reta = (g.latR[g.lat_idx(li, lj + 1)] - g.latR[g.lat_idx(li, lj - 1)]) / g.deta;
    double zeta = (g.latZ[g.lat_idx(li, lj + 1)] - g.latZ[g.lat_idx(li, lj - 1)]) / g.deta;
    double J = rxi * zeta - reta * zxi;
    ur = (uxi * zeta - ueta * zxi) / J;
    uz = (ueta * rxi - uxi * reta) / J;
}

}  // namespace

double energy(const MeridianGrid& g, const std::vector<double>& u, double alpha) {
    if (static_cast<int>(u.size()) != g.cells())
        throw std::domain_error("energy: field size mismatch");
    if (!(alpha > 0.0)) throw std::domain_error("energy: alpha must be positive");
    double E = 0.0;
    for (int j = 0; j < g.neta; ++j) {
        for (int i = 0; i < g.nxi; ++i) {
            double ur, uz;
            cell_gradient(g, u, i, j, ur, uz);
            double q = 1.0 - u[g.idx(i, j)] * u[g.idx(i, j)];
            E += g.weight[g.idx(i, j)] *
                 (0.5 * alpha * (ur * ur + uz * uz) + q * q / (4.0 * alpha));
        }
    }
    return E;
}

double h1_norm(const MeridianGrid& g, const std::vector<double>& u) {
    if (static_cast<int>(u.size()) != g.cells())
        throw std::domain_error("h1_norm: field size mismatch");
    double s = 0.0;
    for (int j = 0; j < g.neta; ++j) {
        for (int i = 0; i < g.nxi; ++i) {
            double ur, uz;
            cell_gradient(g, u, i, j, ur, uz);
            double v = u[g.idx(i, j)];
            s += g.weight[g.idx(i, j)] * (v * v + ur * ur + uz * uz);
        }
    }
    return std::sqrt(s);
}

InterfacePolyline zero_level_set(const MeridianGrid& g, const std::vector<double>& u) {
    InterfacePolyline out;
    // Augment the cell-center lattice with a wall column: by the Neumann
    // condition the boundary value equals the last cell value to O(h^2), so
    // the extracted polyline reaches the wall instead of stopping half a
    // cell short.
    int nc = g.nxi + 1;  // columns: cells 0..nxi-1 plus the wall
    auto val = [&](int i, int j) {
        return i < g.nxi ? u[g.idx(i, j)] : u[g.idx(g.nxi - 1, j)];
    };
    auto pos = [&](int i, int j) -> std::array<double, 2> {
        if (i < g.nxi) return {g.cr[g.idx(i, j)], g.cz[g.idx(i, j)]};
        int li = 2 * g.nxi, lj = 2 * j + 1;
        return {g.latR[g.lat_idx(li, lj)], g.latZ[g.lat_idx(li, lj)]};
    };
    auto node = [&](int i, int j) { return j * nc + i; };

    std::vector<int> xid(static_cast<size_t>(nc) * g.neta, -1);
    std::vector<int> yid(static_cast<size_t>(nc) * g.neta, -1);
    auto cross = [&](int ia, int ja, int ib, int jb) -> int {
        double ua = val(ia, ja), ub = val(ib, jb);
        if (!(ua * ub < 0.0) && ua != 0.0) return -1;
        double f = (ua == ub) ? 0.5 : ua / (ua - ub);
        auto pa = pos(ia, ja), pb = pos(ib, jb);
        out.points.push_back({pa[0] + f * (pb[0] - pa[0]), pa[1] + f * (pb[1] - pa[1])});
        return static_cast<int>(out.points.size()) - 1;
    };
    for (int j = 0; j < g.neta; ++j)
        for (int i = 0; i + 1 < nc; ++i) xid[node(i, j)] = cross(i, j, i + 1, j);
    for (int j = 0; j + 1 < g.neta; ++j)
        for (int i = 0; i < nc; ++i) yid[node(i, j)] = cross(i, j, i, j + 1);
    if (out.points.empty())
        throw std::runtime_error("zero_level_set: field has no sign change");

    // Connect crossings sharing a dual cell.
    for (int j = 0; j + 1 < g.neta; ++j) {
        for (int i = 0; i + 1 < nc; ++i) {
            int ids[4] = {xid[node(i, j)], xid[node(i, j + 1)], yid[node(i, j)],
                          yid[node(i + 1, j)]};
            int found[4], nf = 0;
            for (int v : ids)
                if (v >= 0) found[nf++] = v;
            if (nf == 2) out.segments.push_back({found[0], found[1]});
            else if (nf > 2)
                for (int k = 1; k < nf; ++k) out.segments.push_back({found[0], found[k]});
        }
    }
    return out;
}

namespace {

double point_segment_distance(const std::array<double, 2>& q,
                              const std::array<double, 2>& a,
                              const std::array<double, 2>& b) {
    double vx = b[0] - a[0], vy = b[1] - a[1];
    double wx = q[0] - a[0], wy = q[1] - a[1];
    double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
    return std::hypot(wx - t * vx, wy - t * vy);
}

}  // namespace

double hausdorff_to_catenoid(const InterfacePolyline& interface,
                             const CriticalPlacement& placement,
                             const AxisymDomain& domain) {
    if (interface.points.empty())
        throw std::domain_error("hausdorff_to_catenoid: empty interface");
    double c = placement.c;

    int m = 4000;
    std::vector<std::array<double, 2>> curve;
    curve.reserve(m + 1);
    for (int k = 0; k <= m; ++k) {
        double y = -placement.y_bar + 2.0 * placement.y_bar * k / m;
        auto p = meridian_point(c, y);
        if (domain.phi(p[0], p[1]) <= 1e-12) curve.push_back(p);
    }

    // Interface -> curve: Fermi distance with a sampling fallback.
    double d1 = 0.0;
    for (const auto& q : interface.points) {
        MeridianFermi mf = fermi_invert_meridian(c, q[0], q[1]);
        double d;
        if (mf.ok && std::abs(mf.y) <= placement.y_bar + 1e-9) {
            d = std::abs(mf.z);
        } else {
            d = std::numeric_limits<double>::infinity();
            for (const auto& p : curve)
                d = std::min(d, std::hypot(q[0] - p[0], q[1] - p[1]));
        }
        d1 = std::max(d1, d);
    }

    // Curve -> interface polyline.
    double d2 = 0.0;
    for (const auto& p : curve) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& s : interface.segments)
            d = std::min(d, point_segment_distance(p, interface.points[s[0]],
                                                   interface.points[s[1]]));
        if (interface.segments.empty())
            for (const auto& q : interface.points)
                d = std::min(d, std::hypot(q[0] - p[0], q[1] - p[1]));
        d2 = std::max(d2, d);
    }
    return std::max(d1, d2);
}

std::vector<SolveReport> continuation_study(const AxisymDomain& domain,
                                            const std::vector<double>& alphas,
                                            const ContinuationConfig& config,
                                            ContinuationState* final_state) {
    for (size_t i = 0; i + 1 < alphas.size(); ++i)
        if (!(alphas[i] > alphas[i + 1]))
            throw std::domain_error("continuation_study: alphas must descend");

    CriticalPlacement cp = critical_placement(domain);
    ProfileConstants pc = compute_constants(1e-12);
    Psi1Correction psi = solve_psi1(12.0, 1.0);

    GridClustering cl;
    cl.enabled = true;
    cl.c = cp.c;
    auto circ = meridian_point(cp.c, cp.y_bar);
    cl.phi_c = std::atan2(circ[1] / domain.b, circ[0] / domain.a);
    // The refined plateau must hold the |u| < 0.9 band (|z| <~ 2.2 alpha)
    // of the largest member, with margin for the distance-proxy distortion.
    double amax = alphas.front();
    cl.width = std::max(0.6, 2.9 * amax / cp.c);
    cl.band = std::max(0.35, 0.15 + 2.9 * amax / std::min(domain.a, domain.b));

    std::vector<SolveReport> out;
    MeridianGrid prev_grid;
    std::vector<double> prev_u;
    bool have_prev = false;

    for (double alpha : alphas) {
        double fine = alpha * std::sqrt(2.0) / config.ppl;
        auto nres = grid_resolution(domain, cl, fine);
        MeridianGrid grid = build_grid(domain, nres[0], nres[1], cl);

        ApproximationSpec spec;
        spec.alpha = alpha;
        spec.placement = cp;
        spec.with_psi1 = config.with_psi1;
        if (config.with_reduced_h) {
            ReducedDisplacement rd = solve_reduced_h(cp, alpha, pc);
            spec.h_y = rd.h.y;
            spec.h_vals = rd.h.h;
        }
        Approximation U(spec, psi);

        std::vector<double> u0(grid.cells());
        std::vector<double> uapprox(grid.cells());
        for (int k = 0; k < grid.cells(); ++k)
            uapprox[k] = U.value_meridian(grid.cr[k], grid.cz[k]);
        if (config.seed_from_previous && have_prev) {
            // Bilinear interpolation in the shared computational coordinates.
            for (int j = 0; j < grid.neta; ++j) {
                for (int i = 0; i < grid.nxi; ++i) {
                    double x = (i + 0.5) / grid.nxi * prev_grid.nxi - 0.5;
                    double y = (j + 0.5) / grid.neta * prev_grid.neta - 0.5;
                    int i0 = std::clamp(static_cast<int>(std::floor(x)), 0, prev_grid.nxi - 2);
                    int j0 = std::clamp(static_cast<int>(std::floor(y)), 0, prev_grid.neta - 2);
                    double fx = std::clamp(x - i0, 0.0, 1.0);
                    double fy = std::clamp(y - j0, 0.0, 1.0);
                    u0[grid.idx(i, j)] =
                        (1 - fx) * (1 - fy) * prev_u[prev_grid.idx(i0, j0)] +
                        fx * (1 - fy) * prev_u[prev_grid.idx(i0 + 1, j0)] +
                        (1 - fx) * fy * prev_u[prev_grid.idx(i0, j0 + 1)] +
                        fx * fy * prev_u[prev_grid.idx(i0 + 1, j0 + 1)];
                }
            }
        } else {
            u0 = uapprox;
        }

        SolveReport rep;
        rep.alpha = alpha;
        try {
            auto [u, r] = newton_solve(grid, alpha, u0, config.newton);
            rep = r;
            rep.alpha = alpha;
            auto pts = zero_level_set(grid, u);
            rep.interface_distance = hausdorff_to_catenoid(pts, cp, domain);
            double sup = 0.0;
            std::vector<double> diff(grid.cells());
            for (int k = 0; k < grid.cells(); ++k) {
                diff[k] = u[k] - uapprox[k];
                sup = std::max(sup, std::abs(diff[k]));
            }
            rep.sup_distance_to_initial = sup;
            rep.h1_distance_to_initial = h1_norm(grid, diff);
            prev_grid = std::move(grid);
            prev_u = std::move(u);
            have_prev = true;
        } catch (const NewtonError& e) {
            rep = e.partial;
            rep.alpha = alpha;
            rep.converged = false;
        }
        out.push_back(std::move(rep));
    }
    if (final_state && have_prev) {
        final_state->valid = true;
        final_state->grid = std::move(prev_grid);
        final_state->u = std::move(prev_u);
    }
    return out;
}

}  // namespace alc
