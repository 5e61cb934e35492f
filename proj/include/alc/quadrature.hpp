#pragma once

#include <functional>
#include <stdexcept>

namespace alc {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Simpson quadrature on [a,b] to absolute tolerance tol.  The
// first min_depth bisection levels are unconditional, so localized
// integrands on wide intervals are not missed by the coarse initial
// samples.  Throws QuadratureError if the tolerance cannot be met within
// max_depth levels of refinement.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth = 40, int min_depth = 6);

// Fixed 5-point Gauss-Legendre panel; intended for short intervals of
// smooth integrands where the error is far below double precision.
double gauss5(const std::function<double(double)>& f, double a, double b);

// Composite 5-point Gauss with panels no longer than max_step.
double gauss5_composite(const std::function<double(double)>& f, double a,
                        double b, double max_step);

}  // namespace alc
