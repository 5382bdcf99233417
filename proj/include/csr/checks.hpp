#ifndef CSR_CHECKS_HPP
#define CSR_CHECKS_HPP

#include <random>
#include <string>
#include <vector>

#include "csr/graph.hpp"
#include "csr/variation.hpp"

// Seeded randomized verification suites. They back the `variation-check`,
// `geometry-check` and `surface-variation` commands and the acceptance runs;
// every draw is reproducible from the seed.

namespace csr {

using Rng = std::mt19937_64;

// --- seeded generators -----------------------------------------------------

// Polynomial with |total coefficient mass| <= amp over the listed variables.
Expression random_polynomial(Rng& rng, int degree, double amp, bool use_x = true,
                             bool use_y = true, bool use_t = true);
// amp * sin(k . (x,y,t) + phase) with low frequencies.
Expression random_sin_term(Rng& rng, double amp);
// Identity plus 0.1-scale sin perturbations (positive definite everywhere).
ContactMetric random_perturbed_metric(Rng& rng);
// Identity plus a small random polynomial perturbation (positive definite on
// the unit box).
ContactMetric random_polynomial_metric(Rng& rng);
// Smooth graph data of amplitude ~amp on the unit square.
ScalarField random_graph_function(Rng& rng, double amp = 0.3);
// Smooth test function vanishing identically on the boundary of `dom`.
ScalarField random_test_function(Rng& rng, const GraphDomain& dom);
ScalarField random_prescribed_f(Rng& rng, double amp = 0.5);

// --- suites ------------------------------------------------------------------

struct VariationCheckCase {
    std::string metric_kind;
    double analytic = 0.0;
    double finite_difference = 0.0;
    double rel_err = 0.0;
};

struct VariationCheckResult {
    std::vector<VariationCheckCase> cases;
    double max_rel_err = 0.0;
    bool pass = false;  // max_rel_err <= 1e-6
};

// first_variation against the centered FD of pmc_value (s-step 1e-4).
VariationCheckResult run_variation_check(unsigned seed, int cases, int nx, int nt);

struct GeometryCheckResult {
    int metrics = 0;
    int points = 0;
    double max_bracket_identity = 0.0;   // |2<J(v),w> + <[v,w],T>|
    double max_J_of_T = 0.0;
    double max_tau_of_T = 0.0;
    double min_orientation = 0.0;        // 2 g(J(v), J(v)) over unit horizontal v
    double max_nabla_T = 0.0;
    double max_D_T_T = 0.0;
    double max_compatibility = 0.0;      // d/ds g(V,W) - g(nabla V, W) - g(V, nabla W)
    bool pass = false;
};

GeometryCheckResult run_geometry_check(unsigned seed, int n_metrics, int n_points);

struct SurfaceVariationCase {
    std::string surface_kind;
    double analytic = 0.0;
    double flow = 0.0;
    double err = 0.0;
    double tol = 0.0;
};

struct SurfaceVariationResult {
    std::vector<SurfaceVariationCase> cases;
    double max_excess = 0.0;  // max err/tol
    bool pass = false;
};

// first_variation_general against the flow FD oracle (s-step 1e-4) on a
// vertical plane and random graph surfaces.
SurfaceVariationResult run_surface_variation_check(unsigned seed, int n_surfaces,
                                                   int n_fields, int nx, int nt);

// Random compactly supported ambient field whose support box covers the given
// surface patch.
AmbientField random_ambient_field(Rng& rng, const ParamSurface& surface);

}  // namespace csr

#endif
