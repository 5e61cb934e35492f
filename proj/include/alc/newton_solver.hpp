#pragma once

#include <stdexcept>
#include <vector>

#include "alc/approx.hpp"
#include "alc/meridian_grid.hpp"

namespace alc {

struct NewtonOptions {
    double tol = 1e-9;       // max-norm of the pointwise PDE residual
    int max_iter = 25;
    int max_backtracks = 10;
};

struct SolveReport {
    double alpha = 0.0;
    int iterations = 0;
    double final_residual = 0.0;
    double energy = 0.0;
    double interface_distance = -1.0;  // filled when a placement is known
    double sup_distance_to_initial = 0.0;
    double h1_distance_to_initial = 0.0;
    bool converged = false;
    std::vector<double> residual_history;
};

struct NewtonError : std::runtime_error {
    explicit NewtonError(const std::string& what, SolveReport partial_report)
        : std::runtime_error(what), partial(std::move(partial_report)) {}
    SolveReport partial;
};

// Damped Newton for  alpha^2 Laplacian(u) + u - u^3 = 0  on the grid with
// the natural Neumann wall.  pre: the layer region carries at least 8 cells
// per width alpha*sqrt(2) (checked when a layer is present in the initial
// field).  Throws NewtonError on stagnation with the residual history.
std::pair<std::vector<double>, SolveReport> newton_solve(const MeridianGrid& grid,
                                                         double alpha,
                                                         const std::vector<double>& initial,
                                                         const NewtonOptions& opts = {});

// Allen-Cahn energy of a discrete field (quadrature with the axisymmetric
// weights; exactly zero for the pure phases).
double energy(const MeridianGrid& grid, const std::vector<double>& u, double alpha);

// H1(Omega) norm of a discrete field by the same quadrature.
double h1_norm(const MeridianGrid& grid, const std::vector<double>& u);

// Zero-level-set polyline from edge crossings of the cell-center graph,
// connected through the dual cells (marching-squares style).
struct InterfacePolyline {
    std::vector<std::array<double, 2>> points;
    std::vector<std::array<int, 2>> segments;  // index pairs into points
};

InterfacePolyline zero_level_set(const MeridianGrid& grid,
                                 const std::vector<double>& u);

// Hausdorff distance between the interface polyline and the placed catenoid
// meridian clipped to the domain.
double hausdorff_to_catenoid(const InterfacePolyline& interface,
                             const CriticalPlacement& placement,
                             const AxisymDomain& domain);

struct ContinuationConfig {
    int ppl = 8;  // cells per layer width alpha*sqrt(2)
    bool with_psi1 = true;
    bool with_reduced_h = true;
    bool seed_from_previous = true;
    NewtonOptions newton;
};

// Last converged discrete state of a continuation, for export.
struct ContinuationState {
    bool valid = false;
    MeridianGrid grid;
    std::vector<double> u;
};

// Descending-alpha continuation on a fixed domain: each alpha is solved on
// its own clustered grid; the previous solution (interpolated in the fixed
// computational coordinates) seeds the next solve when requested, the
// assembled approximation otherwise.  A failed member is reported with
// converged = false and the study continues.
std::vector<SolveReport> continuation_study(const AxisymDomain& domain,
                                            const std::vector<double>& alphas,
                                            const ContinuationConfig& config,
                                            ContinuationState* final_state = nullptr);

}  // namespace alc
