#include "alc/sturm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace alc {

int sturm_count_below(const SymTridiag& T, double x) {
    int n = static_cast<int>(T.diag.size());
    int count = 0;
    double d = 1.0;
    const double tiny = std::numeric_limits<double>::min();
    for (int i = 0; i < n; ++i) {
        double off2 = (i > 0) ? T.off[i - 1] * T.off[i - 1] : 0.0;
        d = T.diag[i] - x - ((i > 0) ? off2 / d : 0.0);
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++count;
    }
    return count;
}

namespace {

std::pair<double, double> gershgorin(const SymTridiag& T) {
    int n = static_cast<int>(T.diag.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(T.off[i - 1]);
        if (i + 1 < n) r += std::abs(T.off[i]);
        lo = std::min(lo, T.diag[i] - r);
        hi = std::max(hi, T.diag[i] + r);
    }
    return {lo, hi};
}

}  // namespace

double sturm_eigenvalue(const SymTridiag& T, int k, double tol) {
    int n = static_cast<int>(T.diag.size());
    if (k < 0 || k >= n) throw std::domain_error("sturm_eigenvalue: index out of range");
    auto [lo, hi] = gershgorin(T);
    // Absolute-plus-relative termination: the spectra here carry near-zero
    // eigenvalues whose sign and size matter at 1e-8 while the Gershgorin
    // span is ~1/h^2.
    for (int it = 0;
         it < 300 && (hi - lo) > tol * (1.0 + std::min(std::abs(lo), std::abs(hi)));
         ++it) {
        double m = 0.5 * (lo + hi);
        if (sturm_count_below(T, m) <= k)
            lo = m;
        else
            hi = m;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> sturm_eigenvalues_above(const SymTridiag& T, double floor,
                                            double tol) {
    int n = static_cast<int>(T.diag.size());
    int below = sturm_count_below(T, floor);
    std::vector<double> out;
    for (int k = below; k < n; ++k) out.push_back(sturm_eigenvalue(T, k, tol));
    return out;
}

std::vector<double> tridiag_solve(std::vector<double> lower, std::vector<double> diag,
                                  std::vector<double> upper, std::vector<double> rhs) {
    int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        double m = lower[i - 1] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

}  // namespace alc
