#ifndef CSR_CURVES_HPP
#define CSR_CURVES_HPP

#include <limits>
#include <string>
#include <vector>

#include "csr/graph.hpp"

// Characteristic curves of intrinsic graphs: the projected curves
// s -> (s, t(s)) satisfy t' = 2 u(s, t), their lifts are the horizontal
// curves of the embedded surface. Tracing uses classical fourth-order
// Runge-Kutta with bicubic interpolation of the grid.

namespace csr {

struct CharacteristicCurve {
    double a = 0.0, b = 0.0;      // base point (t(a) = b)
    double halfwidth = 0.0;
    double step = 0.0;
    int anchor = 0;               // index with s[anchor] = a
    bool clipped = false;         // left the domain before reaching a +/- r

    std::vector<double> s;
    std::vector<double> t;
    std::vector<double> q;        // foliation Jacobian (after foliation_jacobian)
    std::vector<Point3> lift;     // Gamma(s) on the embedded surface
    std::vector<double> M, K;     // along-curve fields (after regularity_diagnostic)

    int size() const { return static_cast<int>(s.size()); }
};

struct RegularityReport {
    double sup = 0.0;                 // sup |dM/dxi - K| along the curve
    std::vector<double> residual;     // per-sample values (one-sided at the ends)
    std::vector<double> level_sup;    // filled by refinement studies
    std::vector<double> level_h;
    double estimated_order = std::numeric_limits<double>::quiet_NaN();
};

CharacteristicCurve trace(const IntrinsicGraph& graph, double a, double b, double halfwidth,
                          double step);

// Integrates q' = 2 u_t(s, t(s)) q, q(a) = 1 with the same integrator and
// step as trace, and stores the samples in the curve.
void foliation_jacobian(const IntrinsicGraph& graph, CharacteristicCurve& curve);

// Forward trace then backward retrace; returns |t_back(a) - b|.
double retrace_error(const IntrinsicGraph& graph, double a, double b, double halfwidth,
                     double step);
bool uniqueness_check(const IntrinsicGraph& graph, double a, double b, double halfwidth,
                      double step, double tol = 1e-8);

// sup |dM/dxi - K| along the curve with centered divided differences of the
// interpolated M field; two samples at each end are excluded from the sup.
RegularityReport regularity_diagnostic(const IntrinsicGraph& graph, const ContactMetric& metric,
                                       const ScalarField& f, CharacteristicCurve& curve,
                                       FunctionalSign sign = FunctionalSign::AreaMinusVolume);

// sup |nabla_Z Z - H nu_h| along the curve (sub-Riemannian connection,
// divided differences of the frame along the lift).
double geodesic_check(const IntrinsicGraph& graph, const ContactMetric& metric,
                      const CharacteristicCurve& curve, const std::vector<double>& H);

// sup |nabla_Z(nabla_Z Z) - (Z(H) nu_h - H^2 Z)| along the curve.
double geodesic_recursion_check(const IntrinsicGraph& graph, const ContactMetric& metric,
                                const CharacteristicCurve& curve, const std::vector<double>& H);

// sup |t' - 2 u x'| over the samples (t' by centered divided differences).
double lift_horizontality_residual(const IntrinsicGraph& graph,
                                   const CharacteristicCurve& curve);

// Columns: s, t, q, M, K, dM/dxi - K.
void write_curve_csv(const std::string& path, const CharacteristicCurve& curve,
                     const RegularityReport& report);

}  // namespace csr

#endif
