#ifndef CSR_SOLVER_HPP
#define CSR_SOLVER_HPP

#include <limits>
#include <string>
#include <vector>

#include "csr/curves.hpp"
#include "csr/graph.hpp"

// Numerical critical points of the discretized prescribed-mean-curvature
// functional on intrinsic graphs with Dirichlet data, optionally under a
// volume constraint. The weak form is discretized with piecewise-bilinear
// nodal test functions and 2x2 Gauss quadrature per cell, so the assembled
// residual is exactly the gradient of the discrete functional.

namespace csr {

struct DiscretizedProblem {
    GraphDomain dom;
    ContactMetric metric;
    ScalarField f;         // prescribed curvature
    ScalarField boundary;  // Dirichlet data, evaluated at (x, 0, t)
    FunctionalSign sign = FunctionalSign::AreaMinusVolume;
};

struct SolveConfig {
    double tol = 1e-10;    // sup-norm of the normalized residual
    int max_iter = 100;
    double damping = 0.5;  // backtracking factor
    double vol_tol = 1e-9; // constrained runs: |volume - target|
};

struct SolveResult {
    std::vector<double> u;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // accepted sup-norms, monotone
    std::string message;
    // Constrained runs only:
    double multiplier = std::numeric_limits<double>::quiet_NaN();
    double volume = std::numeric_limits<double>::quiet_NaN();
};

// Dirichlet data sampled on the full grid (the interior is filled with the
// same expression; used as the initial iterate).
std::vector<double> sample_boundary(const DiscretizedProblem& problem);

// Discrete functional value (cell Gauss quadrature; the subgraph integral
// uses adaptive Simpson with tolerance `tol`).
double functional_value(const DiscretizedProblem& problem, const std::vector<double>& u,
                        double tol = 1e-12);
// Same quadrature for the det(G)-weighted subgraph volume.
double discrete_volume(const DiscretizedProblem& problem, const std::vector<double>& u,
                       double tol = 1e-12);

// Full nodal gradient of the discrete functional (boundary entries included).
std::vector<double> assemble_gradient(const DiscretizedProblem& problem,
                                      const std::vector<double>& u);
std::vector<double> assemble_area_gradient(const DiscretizedProblem& problem,
                                           const std::vector<double>& u);
std::vector<double> assemble_volume_gradient(const DiscretizedProblem& problem,
                                             const std::vector<double>& u);

// Gradient at the interior nodes normalized by the cell area; row-major in t
// over the interior grid.
std::vector<double> assemble_residual(const DiscretizedProblem& problem,
                                      const std::vector<double>& u);

SolveResult solve(const DiscretizedProblem& problem, const SolveConfig& config = {});

// Critical point of the area under the volume constraint (the problem's f is
// ignored); reports the multiplier estimate H0.
SolveResult volume_constrained_solve(const DiscretizedProblem& problem, double target_volume,
                                     const SolveConfig& config = {});

// <g_area, w> / <g_volume, w> for seeded random interior test vectors w;
// estimates agree at a constrained critical point.
std::vector<double> multiplier_estimates(const DiscretizedProblem& problem,
                                         const std::vector<double>& u, unsigned seed,
                                         int count);

struct RefineLevelReport {
    int nx = 0, nt = 0;
    double h = 0.0;
    SolveResult solution;
    double diagnostic_sup = 0.0;  // max over the traced curves
};

struct RefineStudyReport {
    std::vector<RefineLevelReport> levels;
    double estimated_order = std::numeric_limits<double>::quiet_NaN();
};

// Solves on `levels` nested grids (each halving h) and runs the regularity
// diagnostic along `n_curves` characteristic curves per level.
RefineStudyReport refine_study(const DiscretizedProblem& problem, int levels,
                               const SolveConfig& config = {}, int n_curves = 5,
                               double halfwidth_frac = 0.2);

// Negative control: the same diagnostic ladder on a frozen (non-critical)
// analytic graph instead of solver output.
RefineStudyReport refine_study_frozen(const DiscretizedProblem& problem, int levels,
                                      const ScalarField& u, int n_curves = 5,
                                      double halfwidth_frac = 0.2);

}  // namespace csr

#endif
