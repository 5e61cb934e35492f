#include "alc/jacobi.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "alc/catenoid.hpp"
#include "alc/quadrature.hpp"
#include "alc/sturm.hpp"

namespace alc {

namespace {

double weight(double y) { return std::sqrt(1.0 + y * y); }

double a2_unit(double y) {
    double s = 1.0 + y * y;
    return 2.0 / (s * s);
}

void check_interval(const RobinProblem& p) {
    if (!(p.y1 < p.y2)) throw std::domain_error("solve_robin: need y1 < y2");
    if (p.m < 0) throw std::domain_error("solve_robin: mode must be nonnegative");
}

}  // namespace

ModeCoeffs mode_operator(int m, double y) {
    if (m < 0) throw std::domain_error("mode_operator: mode must be nonnegative");
    double s = 1.0 + y * y;
    return {y / s, 2.0 / (s * s) - static_cast<double>(m) * m / s};
}

double nondeg_determinant(double y1, double y2, double K1c, double K2c) {
    JacobiFieldPair f1 = jacobi_fields(y1);
    JacobiFieldPair f2 = jacobi_fields(y2);
    double a11 = f1.dz1 + K1c * f1.z1;
    double a12 = f1.dz2 + K1c * f1.z2;
    double a21 = f2.dz1 - K2c * f2.z1;
    double a22 = f2.dz2 - K2c * f2.z2;
    return a11 * a22 - a12 * a21;
}

RobinSolution solve_robin_fundamental(const RobinProblem& prob, int n) {
    check_interval(prob);
    if (prob.m != 0)
        throw std::domain_error("solve_robin_fundamental: fundamental system is mode-0 only");
    if (n < 3) throw std::domain_error("solve_robin_fundamental: n too small");

    double det = nondeg_determinant(prob.y1, prob.y2, prob.kappa1, prob.kappa2);
    if (std::abs(det) < 1e-12)
        throw std::runtime_error("solve_robin: degenerate Robin problem (determinant ~ 0)");

    RobinSolution sol;
    sol.y.resize(n);
    sol.h.resize(n);
    double hstep = (prob.y2 - prob.y1) / (n - 1);

    // Particular solution by variation of parameters:
    //   u_p = z2 * J1 - z1 * J2,  J1 = Int z1 f w,  J2 = Int z2 f w,
    // with w = sqrt(1+y^2) = 1/W, the reciprocal Wronskian weight.
    std::vector<double> J1(n, 0.0), J2(n, 0.0);
    bool have_f = static_cast<bool>(prob.f);
    if (have_f) {
        auto i1 = [&](double s) { return jacobi_fields(s).z1 * prob.f(s) * weight(s); };
        auto i2 = [&](double s) { return jacobi_fields(s).z2 * prob.f(s) * weight(s); };
        for (int i = 1; i < n; ++i) {
            double a = prob.y1 + (i - 1) * hstep, b = prob.y1 + i * hstep;
            J1[i] = J1[i - 1] + gauss5(i1, a, b);
            J2[i] = J2[i - 1] + gauss5(i2, a, b);
        }
    }

    // Boundary rows B1[u] = u'(y1) + k1 u(y1) = g1, B2[u] = u'(y2) - k2 u(y2) = g2.
    JacobiFieldPair e1 = jacobi_fields(prob.y1);
    JacobiFieldPair e2 = jacobi_fields(prob.y2);
    double a11 = e1.dz1 + prob.kappa1 * e1.z1;
    double a12 = e1.dz2 + prob.kappa1 * e1.z2;
    double a21 = e2.dz1 - prob.kappa2 * e2.z1;
    double a22 = e2.dz2 - prob.kappa2 * e2.z2;

    // u_p(y1) = u_p'(y1) = 0, so B1[u_p] = 0; at y2:
    double up2 = 0.0, dup2 = 0.0;
    if (have_f) {
        up2 = e2.z2 * J1[n - 1] - e2.z1 * J2[n - 1];
        dup2 = e2.dz2 * J1[n - 1] - e2.dz1 * J2[n - 1];
    }
    double r1 = prob.g1;
    double r2 = prob.g2 - (dup2 - prob.kappa2 * up2);
    double A = (r1 * a22 - r2 * a12) / det;
    double B = (a11 * r2 - a21 * r1) / det;

    for (int i = 0; i < n; ++i) {
        double y = prob.y1 + i * hstep;
        JacobiFieldPair zf = jacobi_fields(y);
        double up = have_f ? (zf.z2 * J1[i] - zf.z1 * J2[i]) : 0.0;
        sol.y[i] = y;
        sol.h[i] = A * zf.z1 + B * zf.z2 + up;
    }
    return sol;
}

RobinSolution solve_robin_fd(const RobinProblem& prob, int n) {
    check_interval(prob);
    if (n < 5) throw std::domain_error("solve_robin_fd: n too small");

    double hs = (prob.y2 - prob.y1) / (n - 1);
    std::vector<double> lo(n - 1), di(n), up(n - 1), rhs(n);
    auto fval = [&](double y) { return prob.f ? prob.f(y) : 0.0; };

    for (int i = 0; i < n; ++i) {
        double y = prob.y1 + i * hs;
        ModeCoeffs mc = mode_operator(prob.m, y);
        if (i == 0) {
            // Ghost elimination: u_{-1} = u_1 - 2 h (g1 - kappa1 u_0).
            di[0] = -2.0 / (hs * hs) + mc.q + (prob.kappa1 * 2.0 / hs) -
                    mc.p * prob.kappa1;
            up[0] = 2.0 / (hs * hs);
            rhs[0] = fval(y) + (2.0 / hs - mc.p) * prob.g1;
        } else if (i == n - 1) {
            // u_{n} = u_{n-2} + 2 h (g2 + kappa2 u_{n-1}).
            di[n - 1] = -2.0 / (hs * hs) + mc.q + (prob.kappa2 * 2.0 / hs) +
                        mc.p * prob.kappa2;
            lo[n - 2] = 2.0 / (hs * hs);
            rhs[n - 1] = fval(y) - (2.0 / hs + mc.p) * prob.g2;
        } else {
            lo[i - 1] = 1.0 / (hs * hs) - mc.p / (2.0 * hs);
            di[i] = -2.0 / (hs * hs) + mc.q;
            up[i] = 1.0 / (hs * hs) + mc.p / (2.0 * hs);
            rhs[i] = fval(y);
        }
    }

    RobinSolution sol;
    sol.h = tridiag_solve(std::move(lo), std::move(di), std::move(up), std::move(rhs));
    sol.y.resize(n);
    for (int i = 0; i < n; ++i) sol.y[i] = prob.y1 + i * hs;
    return sol;
}

RobinSolution solve_robin(const RobinProblem& prob, int n) {
    return prob.m == 0 ? solve_robin_fundamental(prob, n) : solve_robin_fd(prob, n);
}

namespace {

// Symmetric finite-volume discretization of L_m with Robin closure on the
// half cells; returns the standard symmetric tridiagonal eigenproblem after
// the diagonal similarity with the lumped mass.
SymTridiag assemble_mode(double y1, double y2, double k1, double k2, int m, int n) {
    double hs = (y2 - y1) / n;
    int sz = n + 1;
    std::vector<double> mass(sz), adiag(sz), aoff(sz - 1);
    for (int i = 0; i < sz; ++i) {
        double y = y1 + i * hs;
        ModeCoeffs mc = mode_operator(m, y);
        double cell = (i == 0 || i == n) ? 0.5 * hs : hs;
        mass[i] = cell * weight(y);
        adiag[i] = cell * weight(y) * mc.q;
    }
    for (int i = 0; i < sz - 1; ++i) {
        double ymid = y1 + (i + 0.5) * hs;
        double flux = weight(ymid) / hs;
        aoff[i] = flux;
        adiag[i] -= flux;
        adiag[i + 1] -= flux;
    }
    // Robin end fluxes: w(y1) u'(y1) = -w(y1) k1 u0 leaves the cell, and
    // w(y2) u'(y2) = +w(y2) k2 un enters it; both add to the diagonal.
    adiag[0] += weight(y1) * k1;
    adiag[sz - 1] += weight(y2) * k2;
    return SymTridiag{std::move(adiag), std::move(aoff)};
}

}  // namespace

RobinSpectralReport spectrum(double y1, double y2, double K1c, double K2c,
                             const std::vector<int>& modes, int count, int n) {
    if (count < 1) throw std::domain_error("spectrum: count must be >= 1");
    if (!(y1 < y2)) throw std::domain_error("spectrum: need y1 < y2");
    if (n < 16) n = 16;

    RobinSpectralReport rep;
    rep.modes = modes;
    rep.zero_tol = 1e-8;
    double min_abs = std::numeric_limits<double>::infinity();
    int morse = 0;

    for (int m : modes) {
        auto eig_at = [&](int nn) {
            SymTridiag T = assemble_mode(y1, y2, K1c, K2c, m, nn);
            int sz = static_cast<int>(T.diag.size());
            // Similarity transform with the lumped mass: D^{-1/2} A D^{-1/2}.
            std::vector<double> mass(sz);
            double hs = (y2 - y1) / nn;
            for (int i = 0; i < sz; ++i) {
                double y = y1 + i * hs;
                double cell = (i == 0 || i == nn) ? 0.5 * hs : hs;
                mass[i] = cell * weight(y);
            }
            for (int i = 0; i < sz; ++i) T.diag[i] /= mass[i];
            for (int i = 0; i < sz - 1; ++i)
                T.off[i] /= std::sqrt(mass[i] * mass[i + 1]);
            return T;
        };

        SymTridiag Tc = eig_at(n);
        SymTridiag Tf = eig_at(2 * n);
        int szc = static_cast<int>(Tc.diag.size());
        int szf = static_cast<int>(Tf.diag.size());

        // Indices are counted from the top (descending).  Collect enough to
        // cover the report, the Morse count and the near-zero pair.
        int above_c = szc - sturm_count_below(Tc, -0.5);
        int zero_idx = szc - sturm_count_below(Tc, 0.0);  // eigenvalues > 0
        int need = std::max(count, std::min(szc, std::max(above_c, zero_idx + 1)));
        need = std::min(need, szc);

        std::vector<double> lam;
        for (int j = 0; j < need; ++j) {
            double lc = sturm_eigenvalue(Tc, szc - 1 - j);
            double lf = sturm_eigenvalue(Tf, szf - 1 - j);
            lam.push_back((4.0 * lf - lc) / 3.0);
        }
        for (double l : lam) {
            min_abs = std::min(min_abs, std::abs(l));
            if (l > rep.zero_tol) ++morse;
        }
        // The eigenvalue just below zero also bounds min |lambda|.
        if (zero_idx < szc) {
            double lc = sturm_eigenvalue(Tc, szc - 1 - zero_idx);
            double lf = sturm_eigenvalue(Tf, szf - 1 - zero_idx);
            min_abs = std::min(min_abs, std::abs((4.0 * lf - lc) / 3.0));
        }
        lam.resize(std::min<size_t>(lam.size(), count));
        rep.eigenvalues.push_back(std::move(lam));
    }
    rep.min_abs_eigenvalue = min_abs;
    rep.nondegenerate = min_abs > rep.zero_tol;
    rep.morse_index = morse;
    return rep;
}

double quadratic_form(double y1, double y2, double kappa1, double kappa2,
                      const std::function<double(double)>& phi,
                      const std::function<double(double)>& dphi) {
    auto integrand = [&](double y) {
        double p = phi(y), dp = dphi(y);
        return (dp * dp - a2_unit(y) * p * p) * weight(y);
    };
    double bulk = integrate(integrand, y1, y2, 1e-11);
    double b1 = weight(y1) * kappa1 * phi(y1) * phi(y1);
    double b2 = weight(y2) * kappa2 * phi(y2) * phi(y2);
    return bulk - b1 - b2;
}

StabilityCertificate stability_certificate(double y1, double y2, double kappa1,
                                           double kappa2,
                                           const std::function<double(double)>& z,
                                           const std::function<double(double)>& dz) {
    if (!(y1 < y2)) throw std::domain_error("stability_certificate: need y1 < y2");
    // Preconditions: z > 0 and L0[z] = 0 on the interval.
    int nchk = 200;
    double hs = (y2 - y1) / nchk;
    for (int i = 0; i <= nchk; ++i) {
        double y = y1 + i * hs;
        if (!(z(y) > 0.0))
            throw std::domain_error("stability_certificate: z must be positive");
    }
    double fd = 1e-4;
    for (int i = 1; i < nchk; ++i) {
        double y = y1 + i * hs;
        double d2 = (z(y + fd) - 2.0 * z(y) + z(y - fd)) / (fd * fd);
        ModeCoeffs mc = mode_operator(0, y);
        if (std::abs(d2 + mc.p * dz(y) + mc.q * z(y)) > 1e-5 * (1.0 + std::abs(z(y))))
            throw std::domain_error("stability_certificate: z does not solve L0[z]=0");
    }

    // d(log z)/dtau_out at the two ends.
    double s1 = -dz(y1) / z(y1) - kappa1;
    double s2 = dz(y2) / z(y2) - kappa2;
    StabilityCertificate cert;
    cert.margin = std::min(s1, s2);
    cert.certified = cert.margin > 0.0;

    if (cert.certified) {
        // Independent validation: Q >= 0 on random smooth test functions.
        std::mt19937 rng(20240531u);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        double L = y2 - y1;
        for (int trial = 0; trial < 100; ++trial) {
            double a1 = coef(rng), a2 = coef(rng), a3 = coef(rng), a0 = coef(rng);
            auto phi = [&](double y) {
                double u = (y - y1) / L * M_PI;
                return a0 + a1 * std::cos(u) + a2 * std::sin(u) + a3 * std::cos(2.0 * u);
            };
            auto dphi = [&](double y) {
                double u = (y - y1) / L * M_PI;
                double du = M_PI / L;
                return (-a1 * std::sin(u) + a2 * std::cos(u) -
                        2.0 * a3 * std::sin(2.0 * u)) * du;
            };
            double q = quadratic_form(y1, y2, kappa1, kappa2, phi, dphi);
            double nrm = integrate([&](double y) { return phi(y) * phi(y) * weight(y); },
                                   y1, y2, 1e-10);
            if (q < -1e-8 * (1.0 + nrm))
                throw std::runtime_error(
                    "stability_certificate: certified configuration produced Q < 0");
        }
    }
    return cert;
}

ReducedDisplacement solve_reduced_h(const CriticalPlacement& placement, double alpha,
                                    const ProfileConstants& constants, int n) {
    double kappa = placement.I * placement.c;  // chart-scaled Robin coefficient
    double det = nondeg_determinant(-placement.y_bar, placement.y_bar, kappa, kappa);
    if (std::abs(det) < 1e-10)
        throw std::runtime_error("solve_reduced_h: degenerate placement");

    // Inward-conormal data c1 * I * m1 at both circles.  In this library's
    // normalization the displacement multiplies no extra alpha (the layer
    // argument is (z - h)/alpha), which makes the canceling boundary datum
    // alpha^2 c1 I m1 / 2: the even part of dU/dn at the circles is
    // (I m1 / 2) alpha t^2 w' + O(alpha^2), and the Robin combination of h
    // enters as (dh/dtau + I h)/alpha.  The sign and the factor were pinned
    // against the measured w'-projection of the boundary error.  Converted
    // to the chart, g_chart = c * G; the y2 row flips sign because B2
    // differentiates outward.
    double G = placement.c * 0.5 * alpha * alpha * constants.c1 * placement.I *
               placement.m1;
    RobinProblem prob;
    prob.y1 = -placement.y_bar;
    prob.y2 = placement.y_bar;
    prob.kappa1 = kappa;
    prob.kappa2 = kappa;
    prob.g1 = G;
    prob.g2 = -G;
    ReducedDisplacement out;
    out.h = solve_robin_fundamental(prob, n);

    if (alpha > 0.0) {
        double hs = out.h.y[1] - out.h.y[0];
        double sup = 0.0, dsup = 0.0, d2sup = 0.0;
        int sz = static_cast<int>(out.h.h.size());
        for (int i = 0; i < sz; ++i) sup = std::max(sup, std::abs(out.h.h[i]));
        for (int i = 1; i + 1 < sz; ++i) {
            double d1 = (out.h.h[i + 1] - out.h.h[i - 1]) / (2.0 * hs);
            double d2 = (out.h.h[i + 1] - 2.0 * out.h.h[i] + out.h.h[i - 1]) / (hs * hs);
            dsup = std::max(dsup, std::abs(d1) / placement.c);
            d2sup = std::max(d2sup, std::abs(d2) / (placement.c * placement.c));
        }
        out.K_bound = (sup + dsup + d2sup) / alpha;
    }
    return out;
}

}  // namespace alc
