#pragma once

#include <functional>
#include <vector>

namespace alc {

// One-dimensional transition layer w(t) = tanh(t/sqrt(2)), the monotone
// solution of w'' + w(1-w^2) = 0 with w(+-inf) = +-1.  Everything here is a
// closed form; the equipartition identity w'^2 = (1-w^2)^2/2 holds pointwise.
struct WValue {
    double w;
    double wp;
    double wpp;
};

WValue eval_w(double t);
double w_of(double t);
double wp_of(double t);

// c0 = ||w'||_{L2}^2 (closed form 2*sqrt(2)/3), sigma0 = the full 1-D layer
// energy (equals c0 by equipartition), c1 = <t^2 w', w'> / c0.
struct ProfileConstants {
    double c0;
    double sigma0;
    double c1;
};

// Computes the constants by adaptive quadrature on a truncated interval; the
// discarded tails are bounded by the exponential decay of w' and stay below
// 1e-12 for the truncation used here.  Throws on invalid tolerance or
// quadrature failure.
ProfileConstants compute_constants(double quadrature_tol);

// Bounded decaying solution of
//
//     psi'' + f'(w(t)) psi = t w'(t),      f(u) = u - u^3,
//
// built by variation of parameters around the homogeneous solution w':
//
//     psi(t) = -w'(t) * Integral_0^t  w'(s)^{-2} Q(s) ds,
//     Q(s)   = Integral_s^inf xi w'(xi)^2 dxi.
//
// Q has a closed-form antiderivative and w'^{-2} Q is evaluated through an
// exponential series for large |s|, so the construction is stable on the
// whole line.  The solution is odd, hence automatically orthogonal to w'.
class Psi1Correction {
  public:
    Psi1Correction(double t_max, double sigma);

    double value(double t) const;   // psi1(t)
    double deriv(double t) const;   // psi1'(t)
    double second(double t) const;  // psi1''(t)

    double sigma() const { return sigma_; }
    double t_max() const { return t_max_; }

    // Sample table on the symmetric build grid (for export and tests).
    const std::vector<double>& grid() const { return t_; }
    const std::vector<double>& samples() const { return psi_; }
    const std::vector<double>& samples_d1() const { return dpsi_; }
    const std::vector<double>& samples_d2() const { return ddpsi_; }

    // max_{|t|<=8} |psi'' + f'(w) psi - t w'| measured with an independent
    // finite-difference stencil at construction time.
    double ode_residual() const { return ode_residual_; }

  private:
    double v_of(double t) const;   // the bounded primitive; odd
    double vp_of(double t) const;  // v' = -Q/w'^2; even

    double t_max_;
    double sigma_;
    double grid_step_;
    std::vector<double> t_, psi_, dpsi_, ddpsi_;
    std::vector<double> v_;  // cumulative primitive at t_ >= 0
    double ode_residual_ = 0.0;
};

// pre: t_max >= 8, 0 < sigma < sqrt(2).  Throws std::domain_error on bad
// arguments and std::runtime_error if the ODE residual check fails.
Psi1Correction solve_psi1(double t_max, double sigma);

// L2(R) projection onto w': coefficient = <f, w'> / c0 and the remainder
// f - coefficient * w'.  The input must decay at the quadrature truncation
// points; a non-decaying input is rejected with std::domain_error.
struct Projection {
    double coefficient;
    std::function<double(double)> remainder;
};

Projection project_on_wprime(const std::function<double(double)>& f);

}  // namespace alc
