#pragma once

#include <vector>

namespace alc {

// Symmetric tridiagonal matrix: diag (size n) and off-diagonal (size n-1).
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;
};

// Number of eigenvalues strictly below x (Sturm count via LDL^T).
int sturm_count_below(const SymTridiag& T, double x);

// k-th eigenvalue in ascending order (0-based) by bisection.
double sturm_eigenvalue(const SymTridiag& T, int k, double tol = 1e-13);

// All eigenvalues with lambda > floor, ascending.
std::vector<double> sturm_eigenvalues_above(const SymTridiag& T, double floor,
                                            double tol = 1e-13);

// Tridiagonal solve (Thomas algorithm with the standard forward sweep);
// lower/upper have size n-1.  Overwrites nothing; returns the solution.
std::vector<double> tridiag_solve(std::vector<double> lower, std::vector<double> diag,
                                  std::vector<double> upper, std::vector<double> rhs);

}  // namespace alc
