#include "alc/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alc/catenoid.hpp"
#include "alc/jacobi.hpp"
#include "alc/sturm.hpp"

namespace alc {

namespace {

constexpr double kC0 = 0.9428090415820634;  // ||w'||^2

// Quintic smoothstep: 1 at x <= 0, 0 at x >= 1.
double smooth_blend(double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

double smooth_blend_d(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -30.0 * x * x * (1.0 - 2.0 * x + x * x);
}

}  // namespace

Approximation::Approximation(const ApproximationSpec& spec, const Psi1Correction& psi)
    : spec_(spec), psi_(psi) {
    double c = spec_.placement.c;
    if (!(spec_.alpha > 0.0)) throw std::domain_error("build_approximation: alpha must be positive");
    if (!(c > 0.0)) throw std::domain_error("build_approximation: invalid placement scale");
    eta_ = spec_.eta > 0.0 ? spec_.eta : 0.5 * c;
    delta_ = spec_.delta > 0.0 ? spec_.delta : 0.25 * c;

    if (!spec_.h_y.empty()) {
        size_t n = spec_.h_y.size();
        if (n < 4 || spec_.h_vals.size() != n)
            throw std::domain_error("build_approximation: bad displacement samples");
        hy0_ = spec_.h_y.front();
        hstep_ = (spec_.h_y.back() - hy0_) / (n - 1);
        if (!(hstep_ > 0.0))
            throw std::domain_error("build_approximation: displacement grid not increasing");
        hval_ = spec_.h_vals;
        // Natural cubic spline moments.
        std::vector<double> lo(n - 1, hstep_ / 6.0), di(n, 2.0 * hstep_ / 3.0),
            up(n - 1, hstep_ / 6.0), rhs(n, 0.0);
        for (size_t i = 1; i + 1 < n; ++i)
            rhs[i] = (hval_[i + 1] - 2.0 * hval_[i] + hval_[i - 1]) / hstep_;
        di[0] = 1.0;
        up[0] = 0.0;
        di[n - 1] = 1.0;
        lo[n - 2] = 0.0;
        hmom_ = tridiag_solve(lo, di, up, rhs);
        has_h_ = true;
    }
}

double Approximation::h_at(double y) const {
    if (!has_h_) return 0.0;
    size_t n = hval_.size();
    double ylast = hy0_ + (n - 1) * hstep_;
    if (y <= hy0_) return hval_.front() + dh_at(hy0_) * (y - hy0_);
    if (y >= ylast) return hval_.back() + dh_at(ylast) * (y - ylast);
    size_t i = std::min<size_t>(static_cast<size_t>((y - hy0_) / hstep_), n - 2);
    double xa = hy0_ + i * hstep_, xb = xa + hstep_;
    double A = (xb - y) / hstep_, B = (y - xa) / hstep_;
    return A * hval_[i] + B * hval_[i + 1] +
           ((A * A * A - A) * hmom_[i] + (B * B * B - B) * hmom_[i + 1]) *
               (hstep_ * hstep_) / 6.0;
}

double Approximation::dh_at(double y) const {
    if (!has_h_) return 0.0;
    size_t n = hval_.size();
    double ylast = hy0_ + (n - 1) * hstep_;
    double yc = std::clamp(y, hy0_, ylast);
    size_t i = std::min<size_t>(static_cast<size_t>((yc - hy0_) / hstep_), n - 2);
    double xa = hy0_ + i * hstep_;
    double A = (xa + hstep_ - yc) / hstep_, B = (yc - xa) / hstep_;
    return (hval_[i + 1] - hval_[i]) / hstep_ +
           (-(3.0 * A * A - 1.0) * hmom_[i] + (3.0 * B * B - 1.0) * hmom_[i + 1]) *
               hstep_ / 6.0;
}

double Approximation::d2h_at(double y) const {
    if (!has_h_) return 0.0;
    size_t n = hval_.size();
    double ylast = hy0_ + (n - 1) * hstep_;
    if (y <= hy0_ || y >= ylast) return 0.0;
    size_t i = std::min<size_t>(static_cast<size_t>((y - hy0_) / hstep_), n - 2);
    double xa = hy0_ + i * hstep_;
    double A = (xa + hstep_ - y) / hstep_, B = (y - xa) / hstep_;
    return A * hmom_[i] + B * hmom_[i + 1];
}

double Approximation::tube_halfwidth(double y) const {
    double c = spec_.placement.c;
    double t1 = eta_ + delta_ * std::log(2.0 + std::sqrt(1.0 + y * y));
    double t2 = 0.45 * c * (1.0 + y * y);
    double t3 = 0.85 * c;  // global injectivity margin of the normal map
    return std::min({t1, t2, t3});
}

double Approximation::dtau(double y) const {
    double c = spec_.placement.c;
    double s = std::sqrt(1.0 + y * y);
    double t1 = eta_ + delta_ * std::log(2.0 + s);
    double t2 = 0.45 * c * (1.0 + y * y);
    double t3 = 0.85 * c;
    if (t1 <= t2 && t1 <= t3) return delta_ * (y / s) / (2.0 + s);
    if (t2 <= t3) return 0.9 * c * y;
    return 0.0;
}

double Approximation::a2(double y) const {
    double c = spec_.placement.c;
    double s = 1.0 + y * y;
    return 2.0 / (c * c * s * s);
}

double Approximation::da2(double y) const {
    double c = spec_.placement.c;
    double s = 1.0 + y * y;
    return -8.0 * y / (c * c * s * s * s);
}

double Approximation::d2a2(double y) const {
    double c = spec_.placement.c;
    double s = 1.0 + y * y;
    return (40.0 * y * y - 8.0) / (c * c * s * s * s * s);
}

double Approximation::heaviside(double r, double x3) const {
    double c = spec_.placement.c;
    double u = x3 / c;
    if (std::abs(u) > 30.0) return 1.0;
    return (r < c * std::cosh(u)) ? 1.0 : -1.0;
}

Approximation::Location Approximation::locate(double r, double x3) const {
    Location loc;
    double c = spec_.placement.c;
    // Cheap distance estimate rejects points far from the tube.
    double u = x3 / c;
    if (std::abs(u) > 30.0) return loc;
    double ch = std::cosh(u);
    if (std::abs(r - c * ch) / ch > 1.3 * c) return loc;

    MeridianFermi mf = fermi_invert_meridian(c, r, x3);
    if (!mf.ok) return loc;
    double tau = tube_halfwidth(mf.y);
    loc.y = mf.y;
    loc.z = mf.z;
    loc.t = (mf.z - h_at(mf.y)) / spec_.alpha;
    loc.in_tube = std::abs(mf.z) < tau;
    loc.in_core = std::abs(mf.z) <= 0.49 * tau;
    return loc;
}

double Approximation::value_meridian(double r, double x3) const {
    if (r < 0.0) r = -r;
    Location loc = locate(r, x3);
    if (!loc.in_tube) return heaviside(r, x3);
    double alpha = spec_.alpha;
    double u1 = w_of(loc.t);
    if (spec_.with_psi1) u1 += alpha * alpha * a2(loc.y) * psi_.value(loc.t);
    double tau = tube_halfwidth(loc.y);
    double az = std::abs(loc.z);
    if (az <= 0.5 * tau) return u1;
    double b = smooth_blend((az - 0.5 * tau) / (0.5 * tau));
    double H = loc.z >= 0.0 ? 1.0 : -1.0;
    return b * u1 + (1.0 - b) * H;
}

double Approximation::value(double x, double y, double z) const {
    return value_meridian(std::hypot(x, y), z);
}

std::array<double, 2> Approximation::gradient_meridian(double r, double x3) const {
    Location loc = locate(r, x3);
    if (!loc.in_tube) return {0.0, 0.0};
    double alpha = spec_.alpha;
    double c = spec_.placement.c;
    double y = loc.y, z = loc.z, t = loc.t;
    double s = std::sqrt(1.0 + y * y);
    std::array<double, 2> that = {y / s, 1.0 / s};
    std::array<double, 2> nhat = {-1.0 / s, y / s};
    double mz = c + z / (1.0 + y * y);

    WValue wv = eval_w(t);
    double B = spec_.with_psi1 ? alpha * alpha * a2(y) : 0.0;
    double Bp = spec_.with_psi1 ? alpha * alpha * da2(y) : 0.0;
    double psi = spec_.with_psi1 ? psi_.value(t) : 0.0;
    double dpsi = spec_.with_psi1 ? psi_.deriv(t) : 0.0;

    double u1t = wv.wp + B * dpsi;
    double u1 = wv.w + B * psi;
    double uz = u1t / alpha;
    double uy = -dh_at(y) * u1t / alpha + Bp * psi;

    std::array<double, 2> grad = {uz * nhat[0] + uy / mz * that[0],
                                  uz * nhat[1] + uy / mz * that[1]};

    double tau = tube_halfwidth(y);
    double az = std::abs(z);
    if (az <= 0.5 * tau) return grad;

    double x = (az - 0.5 * tau) / (0.5 * tau);
    double b = smooth_blend(x);
    double bp = smooth_blend_d(x);
    double H = z >= 0.0 ? 1.0 : -1.0;
    double sgn = z >= 0.0 ? 1.0 : -1.0;
    // grad of x: d/dz and the tau(y) dependence along the chart.
    double xz = sgn * 2.0 / tau;
    double xy = -2.0 * az / (tau * tau) * dtau(y);
    std::array<double, 2> gx = {xz * nhat[0] + xy / mz * that[0],
                                xz * nhat[1] + xy / mz * that[1]};
    return {b * grad[0] + (u1 - H) * bp * gx[0], b * grad[1] + (u1 - H) * bp * gx[1]};
}

Approximation::TubeResidual Approximation::residual_fermi(double r, double x3) const {
    TubeResidual out;
    Location loc = locate(r, x3);
    if (!loc.in_core) return out;

    double alpha = spec_.alpha;
    double c = spec_.placement.c;
    double y = loc.y, z = loc.z, t = loc.t;

    WValue wv = eval_w(t);
    double B = spec_.with_psi1 ? alpha * alpha * a2(y) : 0.0;
    double Bp = spec_.with_psi1 ? alpha * alpha * da2(y) : 0.0;
    double Bpp = spec_.with_psi1 ? alpha * alpha * d2a2(y) : 0.0;
    double psi = 0.0, dpsi = 0.0, ddpsi = 0.0;
    if (spec_.with_psi1) {
        psi = psi_.value(t);
        dpsi = psi_.deriv(t);
        ddpsi = psi_.second(t);
    }

    double U = wv.w + B * psi;
    double Ut = wv.wp + B * dpsi;
    double Utt = wv.wpp + B * ddpsi;
    double hp = dh_at(y), hpp = d2h_at(y);

    double Uz = Ut / alpha;
    double Uzz = Utt / (alpha * alpha);
    double Uy = -hp * Ut / alpha + Bp * psi;
    double Uyy = -hpp * Ut / alpha + hp * hp * Utt / (alpha * alpha) -
                 2.0 * hp * Bp * dpsi / alpha + Bpp * psi;

    double s2 = 1.0 + y * y;
    double s = std::sqrt(s2);
    double mz = c + z / s2;
    double rz = c * s - z / s;
    double mzp = -2.0 * y * z / (s2 * s2);
    double rzp = c * y / s + z * y / (s2 * s);

    double k = 1.0 / (c * s2);
    double Hz = 2.0 * z * k * k / (1.0 - z * z * k * k);

    double lap_tang = Uyy / (mz * mz) + Uy * (rzp * mz - rz * mzp) / (mz * mz * mz * rz);
    double lap = Uzz - Hz * Uz + lap_tang;

    out.S = alpha * alpha * lap + U - U * U * U;
    out.in_core = true;
    return out;
}

Approximation build_approximation(const ApproximationSpec& spec,
                                  const Psi1Correction& psi) {
    return Approximation(spec, psi);
}

MeridianField residual_field(const Approximation& U, const AxisymDomain& domain,
                             double spacing) {
    double alpha = U.spec().alpha;
    if (!(spacing > 0.0) || spacing > alpha / 8.0 + 1e-15)
        throw std::invalid_argument(
            "residual_field: grid does not resolve the layer; need spacing <= alpha/8 = " +
            std::to_string(alpha / 8.0));

    double rmax = domain.a * 1.02;
    double zmax = std::abs(domain.b) * 1.02;
    MeridianField f;
    f.r0 = 0.0;
    f.x30 = -zmax;
    f.dr = spacing;
    f.dx3 = spacing;
    f.nr = static_cast<int>(std::ceil(rmax / spacing)) + 2;
    f.nx3 = 2 * (static_cast<int>(std::ceil(zmax / spacing)) + 1) + 1;
    f.value.assign(static_cast<size_t>(f.nr) * f.nx3, 0.0);
    f.mask.assign(static_cast<size_t>(f.nr) * f.nx3, 0);

    // Sample U on the lattice.
    std::vector<double> u(static_cast<size_t>(f.nr) * f.nx3);
    for (int j = 0; j < f.nx3; ++j) {
        double x3 = f.x30 + j * f.dx3;
        for (int i = 0; i < f.nr; ++i) u[f.idx(i, j)] = U.value_meridian(f.r0 + i * f.dr, x3);
    }

    double a2 = alpha * alpha;
    for (int j = 1; j + 1 < f.nx3; ++j) {
        double x3 = f.x30 + j * f.dx3;
        for (int i = 0; i + 1 < f.nr; ++i) {
            double r = f.r0 + i * f.dr;
            double uc = u[f.idx(i, j)];
            double uzz = (u[f.idx(i, j + 1)] - 2.0 * uc + u[f.idx(i, j - 1)]) / (f.dx3 * f.dx3);
            double lap;
            if (i == 0) {
                lap = 4.0 * (u[f.idx(1, j)] - uc) / (f.dr * f.dr) + uzz;
            } else {
                double urr =
                    (u[f.idx(i + 1, j)] - 2.0 * uc + u[f.idx(i - 1, j)]) / (f.dr * f.dr);
                double ur = (u[f.idx(i + 1, j)] - u[f.idx(i - 1, j)]) / (2.0 * f.dr);
                lap = urr + ur / r + uzz;
            }
            f.value[f.idx(i, j)] = a2 * lap + uc - uc * uc * uc;
            if (domain.inside(r, x3)) f.mask[f.idx(i, j)] |= MeridianField::kInside;
        }
    }

    // Core mask: tube core nodes clear of the boundary collar.
    double collar = 4.0 * alpha * std::abs(std::log(alpha));
    for (int j = 1; j + 1 < f.nx3; ++j) {
        double x3 = f.x30 + j * f.dx3;
        for (int i = 0; i + 1 < f.nr; ++i) {
            if (!(f.mask[f.idx(i, j)] & MeridianField::kInside)) continue;
            double r = f.r0 + i * f.dr;
            auto g = domain.grad_phi(r, x3);
            double dist = std::abs(domain.phi(r, x3)) / std::max(1e-300, std::hypot(g[0], g[1]));
            if (dist <= collar) continue;
            Approximation::Location loc = U.locate(r, x3);
            if (loc.in_core) f.mask[f.idx(i, j)] |= MeridianField::kCore;
        }
    }
    return f;
}

namespace {

struct BoundaryScan {
    double neumann_sup = 0.0;
    double defect = 0.0;
};

BoundaryScan boundary_diagnostics(const Approximation& U, const AxisymDomain& domain) {
    BoundaryScan out;
    int n = 20000;
    // Per-circle samples of (t, dU/dn) for the projection metric.
    std::vector<std::pair<double, double>> upper, lower;
    for (int i = 1; i < n; ++i) {
        double phi = -M_PI / 2.0 + M_PI * i / n;
        double r = domain.a * std::cos(phi);
        double x3 = domain.b * std::sin(phi);
        auto nrm = domain.boundary_normal(r, x3);
        auto g = U.gradient_meridian(r, x3);
        double dn = g[0] * nrm[0] + g[1] * nrm[1];
        out.neumann_sup = std::max(out.neumann_sup, std::abs(dn));
        Approximation::Location loc = U.locate(r, x3);
        if (loc.in_core && std::abs(loc.y) > 0.2) {
            (loc.y > 0 ? upper : lower).push_back({loc.t, dn});
        }
    }
    auto project = [](std::vector<std::pair<double, double>>& v) {
        if (v.size() < 8) return 0.0;
        std::sort(v.begin(), v.end());
        double acc = 0.0;
        for (size_t i = 0; i + 1 < v.size(); ++i) {
            double t0 = v[i].first, t1 = v[i + 1].first;
            double f0 = v[i].second * wp_of(t0), f1 = v[i + 1].second * wp_of(t1);
            acc += 0.5 * (f0 + f1) * (t1 - t0);
        }
        return std::abs(acc) / kC0;
    };
    out.defect = std::max(project(upper), project(lower));
    return out;
}

double ls_slope(const std::vector<double>& alphas, const std::vector<double>& vals) {
    size_t n = alphas.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        double x = std::log(alphas[i]), y = std::log(std::max(vals[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ResidualReport residual_report(const Approximation& U, const AxisymDomain& domain,
                               double spacing) {
    if (domain.shape == AxisymDomain::Shape::HalfSpace)
        throw std::domain_error("residual_report: bounded domains only");
    MeridianField coarse = residual_field(U, domain, spacing);
    MeridianField fine = residual_field(U, domain, 0.5 * spacing);
    double alpha = U.spec().alpha;
    double sigma = U.spec().sigma;

    ResidualReport rep;
    rep.collar_width = 4.0 * alpha * std::abs(std::log(alpha));

    int probes = 0;
    for (int j = 1; j + 1 < coarse.nx3; ++j) {
        for (int i = 0; i + 1 < coarse.nr; ++i) {
            if (!(coarse.mask[coarse.idx(i, j)] & MeridianField::kCore)) continue;
            int fi = 2 * i, fj = 2 * j;
            if (fi + 1 >= fine.nr || fj + 1 >= fine.nx3) continue;
            double sc = coarse.value[coarse.idx(i, j)];
            double sf = fine.value[fine.idx(fi, fj)];
            double comb = (4.0 * sf - sc) / 3.0;
            double r = coarse.r0 + i * coarse.dr;
            double x3 = coarse.x30 + j * coarse.dx3;
            Approximation::Location loc = U.locate(r, x3);
            rep.interior_sup = std::max(rep.interior_sup, std::abs(comb));
            rep.interior_sup_raw = std::max(rep.interior_sup_raw, std::abs(sc));
            rep.weighted_sup =
                std::max(rep.weighted_sup, std::exp(sigma * std::abs(loc.t)) * std::abs(comb));
            ++rep.core_nodes;
            if (probes < 500) {
                Approximation::TubeResidual tr = U.residual_fermi(r, x3);
                if (tr.in_core) {
                    rep.interior_sup_fermi = std::max(rep.interior_sup_fermi, std::abs(tr.S));
                    rep.fermi_crosscheck_max =
                        std::max(rep.fermi_crosscheck_max, std::abs(sc - tr.S));
                    ++probes;
                }
            }
        }
    }
    // Dense pass for the exact-chart sup (cheap, no lattice dependence).
    for (int j = 1; j + 1 < coarse.nx3; ++j) {
        for (int i = 0; i + 1 < coarse.nr; ++i) {
            if (!(coarse.mask[coarse.idx(i, j)] & MeridianField::kCore)) continue;
            double r = coarse.r0 + i * coarse.dr;
            double x3 = coarse.x30 + j * coarse.dx3;
            Approximation::TubeResidual tr = U.residual_fermi(r, x3);
            if (tr.in_core)
                rep.interior_sup_fermi = std::max(rep.interior_sup_fermi, std::abs(tr.S));
        }
    }

    BoundaryScan bs = boundary_diagnostics(U, domain);
    rep.boundary_neumann_sup = bs.neumann_sup;
    rep.robin_defect = bs.defect;
    return rep;
}

ResidualOrders residual_orders(const AxisymDomain& domain,
                               const CriticalPlacement& placement,
                               const Psi1Correction& psi,
                               const ProfileConstants& constants,
                               const std::vector<double>& alphas, bool with_psi1,
                               bool with_reduced_h, int ppl, double sigma) {
    if (alphas.size() < 3)
        throw std::domain_error("residual_orders: need at least three alpha values");
    if (ppl < 12) ppl = 12;

    ResidualOrders out;
    out.alphas = alphas;
    for (double alpha : alphas) {
        ApproximationSpec spec;
        spec.alpha = alpha;
        spec.placement = placement;
        spec.with_psi1 = with_psi1;
        spec.sigma = sigma;
        if (with_reduced_h) {
            ReducedDisplacement rd = solve_reduced_h(placement, alpha, constants);
            spec.h_y = rd.h.y;
            spec.h_vals = rd.h.h;
        }
        Approximation U(spec, psi);
        double spacing = alpha * std::sqrt(2.0) / ppl;
        ResidualReport rep = residual_report(U, domain, spacing);
        out.interior_sup.push_back(rep.interior_sup);
        out.interior_sup_fermi.push_back(rep.interior_sup_fermi);
        out.boundary_sup.push_back(rep.boundary_neumann_sup);
        out.robin_defect.push_back(rep.robin_defect);
    }

    out.slope_interior = ls_slope(out.alphas, out.interior_sup);
    out.slope_interior_fermi = ls_slope(out.alphas, out.interior_sup_fermi);
    out.slope_boundary = ls_slope(out.alphas, out.boundary_sup);
    out.slope_defect = ls_slope(out.alphas, out.robin_defect);

    // Quality flag: the interior sups should decrease along a descending
    // alpha list.
    for (size_t i = 0; i + 1 < out.alphas.size(); ++i) {
        bool desc = out.alphas[i] > out.alphas[i + 1];
        if (desc && out.interior_sup[i + 1] >= out.interior_sup[i]) out.monotone = false;
    }
    return out;
}

}  // namespace alc
