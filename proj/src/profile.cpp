#include "alc/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "alc/quadrature.hpp"

namespace alc {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Antiderivative of u * sech^4(u).
double sech4_moment(double u) {
    double th = std::tanh(u);
    // log(cosh u) without overflow for large |u|.
    double au = std::abs(u);
    double lc = au + std::log1p(std::exp(-2.0 * au)) - std::log(2.0);
    return u * th - u * th * th * th / 3.0 - (2.0 / 3.0) * lc - th * th / 6.0;
}

const double kQinf = (2.0 / 3.0) * std::log(2.0) - 1.0 / 6.0;

// Q(s) = Integral_s^inf xi w'(xi)^2 dxi; even in s.
double q_tail(double s) { return kQinf - sech4_moment(s / kSqrt2); }

// P(s) = Q(s) / w'(s)^2 for s >= 0.  Direct formula for small s; for larger
// s both factors are exponentially small/large, so expand w'^{-2} and use
// the termwise-integrated series (q = exp(-sqrt(2) s)):
//   P(s) = (1+q)^4 * sum_k (-1)^k C(k+3,3) q^k [ s/(sqrt(2)(k+2)) + 1/(2(k+2)^2) ].
double p_of(double s) {
    if (s < 2.0) {
        double wp = wp_of(s);
        return q_tail(s) / (wp * wp);
    }
    double q = std::exp(-kSqrt2 * s);
    double sum = 0.0;
    double qk = 1.0;
    for (int k = 0; k < 80; ++k) {
        double binom = (k + 1.0) * (k + 2.0) * (k + 3.0) / 6.0;
        double ck = (k % 2 == 0) ? binom : -binom;
        double term = ck * qk * (s / (kSqrt2 * (k + 2.0)) + 1.0 / (2.0 * (k + 2.0) * (k + 2.0)));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && k > 2) break;
        qk *= q;
    }
    double e = 1.0 + q;
    return sum * (e * e * e * e);
}

}  // namespace

WValue eval_w(double t) {
    if (!std::isfinite(t)) throw std::domain_error("eval_w: t must be finite");
    double w = std::tanh(t / kSqrt2);
    double one_m = 1.0 - w * w;
    return {w, one_m / kSqrt2, -w * one_m};
}

double w_of(double t) { return std::tanh(t / kSqrt2); }

double wp_of(double t) {
    double w = std::tanh(t / kSqrt2);
    return (1.0 - w * w) / kSqrt2;
}

ProfileConstants compute_constants(double quadrature_tol) {
    if (!(quadrature_tol > 0.0))
        throw std::domain_error("compute_constants: tolerance must be positive");
    // w'^2 <= 8 exp(-2 sqrt(2)|t|): truncation at T keeps the tail below
    // 8 exp(-2 sqrt(2) T)/(2 sqrt(2)); T = 14 gives < 3e-17, T = 18 covers
    // the t^2-weighted integrand as well.
    auto wp2 = [](double t) {
        double wp = wp_of(t);
        return wp * wp;
    };
    double c0 = integrate(wp2, -14.0, 14.0, quadrature_tol * 0.5);
    double m2 = integrate([&](double t) { return t * t * wp2(t); }, -18.0, 18.0,
                          quadrature_tol * 0.5);
    // sigma0 = Integral 1/2 w'^2 + 1/4 (1-w^2)^2 = Integral w'^2 by
    // equipartition, exactly.
    return {c0, c0, m2 / c0};
}

Psi1Correction::Psi1Correction(double t_max, double sigma)
    : t_max_(t_max), sigma_(sigma), grid_step_(0.05) {
    if (!(t_max >= 8.0)) throw std::domain_error("solve_psi1: t_max must be >= 8");
    if (!(sigma > 0.0 && sigma < kSqrt2))
        throw std::domain_error("solve_psi1: sigma must lie in (0, sqrt(2))");

    // Cumulative primitive v(t) = -Integral_0^t P on a half grid; v is odd.
    int nhalf = static_cast<int>(std::ceil(t_max / grid_step_));
    grid_step_ = t_max / nhalf;
    v_.resize(nhalf + 1);
    v_[0] = 0.0;
    for (int j = 0; j < nhalf; ++j) {
        double a = j * grid_step_, b = (j + 1) * grid_step_;
        v_[j + 1] = v_[j] - gauss5(p_of, a, b);
    }

    // Symmetric sample table.
    int n = 2 * nhalf + 1;
    t_.resize(n);
    psi_.resize(n);
    dpsi_.resize(n);
    ddpsi_.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = (i - nhalf) * grid_step_;
        t_[i] = t;
        psi_[i] = value(t);
        dpsi_[i] = deriv(t);
        ddpsi_[i] = second(t);
    }

    // Independent residual check of the defining ODE with a 5-point stencil.
    double h = 0.01;
    double worst = 0.0;
    for (double t = -8.0; t <= 8.0 + 1e-12; t += 0.25) {
        double d2 = (-value(t + 2 * h) + 16 * value(t + h) - 30 * value(t) +
                     16 * value(t - h) - value(t - 2 * h)) /
                    (12 * h * h);
        double w = w_of(t);
        double fp = 1.0 - 3.0 * w * w;
        double res = d2 + fp * value(t) - t * wp_of(t);
        worst = std::max(worst, std::abs(res));
    }
    ode_residual_ = worst;
    if (worst > 1e-8)
        throw std::runtime_error("solve_psi1: ODE residual exceeds 1e-8 (numerical instability)");
}

double Psi1Correction::v_of(double t) const {
    double a = std::abs(t);
    double v;
    int nhalf = static_cast<int>(v_.size()) - 1;
    if (a <= t_max_) {
        int j = std::min(static_cast<int>(a / grid_step_), nhalf - 1);
        // anchor at the nearest stored point below and finish with one panel
        v = v_[j] - gauss5(p_of, j * grid_step_, a);
    } else {
        v = v_[nhalf] - gauss5_composite(p_of, t_max_, a, 0.5);
    }
    return t >= 0.0 ? v : -v;
}

double Psi1Correction::vp_of(double t) const { return -p_of(std::abs(t)); }

double Psi1Correction::value(double t) const { return wp_of(t) * v_of(t); }

double Psi1Correction::deriv(double t) const {
    WValue wv = eval_w(t);
    return wv.wpp * v_of(t) + wv.wp * vp_of(t);
}

double Psi1Correction::second(double t) const {
    // psi'' = w''' v + t w' with w''' = -f'(w) w'; the v'' term cancels
    // against 2 w'' v' identically for this v.
    WValue wv = eval_w(t);
    double wppp = -(1.0 - 3.0 * wv.w * wv.w) * wv.wp;
    return wppp * v_of(t) + t * wv.wp;
}

Psi1Correction solve_psi1(double t_max, double sigma) {
    return Psi1Correction(t_max, sigma);
}

Projection project_on_wprime(const std::function<double(double)>& f) {
    const double T = 40.0;
    double scale = 0.0;
    for (double t : {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0})
        scale = std::max(scale, std::abs(f(t)));
    if (std::abs(f(T)) > 1e-6 * (1.0 + scale) ||
        std::abs(f(-T)) > 1e-6 * (1.0 + scale))
        throw std::domain_error("project_on_wprime: input does not decay");

    static const double c0 = 2.0 * kSqrt2 / 3.0;
    double inner = integrate([&](double t) { return f(t) * wp_of(t); }, -T, T, 1e-13);
    double coeff = inner / c0;
    auto rem = [f, coeff](double t) { return f(t) - coeff * wp_of(t); };
    return {coeff, rem};
}

}  // namespace alc
