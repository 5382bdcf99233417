#ifndef CSR_VARIATION_HPP
#define CSR_VARIATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "csr/graph.hpp"

// Parameterized C^2 test surfaces, their sub-Riemannian frames and area, the
// general first variation of perimeter, mean curvature, and the
// volume-constraint multiplier H0 -- all checked against a flow-based
// finite-difference oracle.

namespace csr {

// Immersion F(sigma1, sigma2) sampled with its first derivatives on a uniform
// parameter rectangle (GraphDomain doubles as the parameter grid, x ~ sigma1,
// t ~ sigma2). `normal_sign = +1` declares N = +(F1 x F2)/|F1 x F2| as the
// inner normal; for embedded intrinsic graphs that is the subgraph side.
struct ParamSurface {
    GraphDomain grid;
    std::vector<Point3> pos;
    std::vector<Vec3> d1, d2;
    double normal_sign = 1.0;

    static ParamSurface from_jets(
        const GraphDomain& grid,
        const std::function<void(double, double, Point3&, Vec3&, Vec3&)>& jet);
    // Positions only; derivatives by second-order grid stencils.
    static ParamSurface from_positions(const GraphDomain& grid, std::vector<Point3> pos);
    // Embedded intrinsic graph with the graph's discrete derivative fields.
    static ParamSurface from_graph(const IntrinsicGraph& graph);
    // Embedded graph of an analytic u(x, t) with symbolic derivatives.
    static ParamSurface graph_surface(const GraphDomain& grid, const ScalarField& u);
    // The vertical plane y = 0: (sigma1, sigma2) -> (sigma1, 0, sigma2).
    static ParamSurface vertical_plane(const GraphDomain& grid);

    ParamSurface flipped() const;  // reversed orientation
};

struct SurfaceFrame {
    std::vector<PointFrame> at;     // ambient data per sample
    std::vector<double> dSigma;     // Riemannian area element |F1 x F2|
    std::vector<Vec3> N;            // unit normal (coordinates), oriented
    std::vector<double> NT;         // <N, T>
    std::vector<double> Nh_norm;    // |N_h|
    std::vector<Vec3> nu_h;         // N_h / |N_h| (zero where singular)
    std::vector<Vec3> Z;            // J(nu_h)/|J(nu_h)| (zero where singular)
    std::vector<Vec3> S;            // <N,T> nu_h - |N_h| T
    std::vector<char> singular;     // |N_h| < eps_sing
    int n_singular = 0;
};

SurfaceFrame surface_frame(const ParamSurface& surface, const ContactMetric& metric,
                           double eps_sing = 1e-8);

// Ambient vector field given by frame components (X, Y, T) with an analytic
// C^infinity plateau cutoff confining the support to `lo..hi`: the cutoff is
// exactly 1 on the inner (1 - 2*margin) box and 0 outside.
class AmbientField {
public:
    AmbientField(ScalarField x_comp, ScalarField y_comp, ScalarField t_comp, Point3 lo,
                 Point3 hi, double margin = 0.25);

    Vec3 value(const Point3& p) const;
    VectorFieldJet jet(const Point3& p) const;       // value + coordinate Jacobian
    double cutoff(const Point3& p) const;
    double vertical_component(const Point3& p) const;   // <U, T>
    Vec3 vertical_gradient(const Point3& p) const;      // coordinate gradient of <U, T>
    bool in_support(const Point3& p) const { return cutoff(p) != 0.0; }

    const Point3& lo() const { return lo_; }
    const Point3& hi() const { return hi_; }

private:
    ScalarField cx_, cy_, ct_;
    Point3 lo_, hi_;
    double margin_;
};

double sr_area(const ParamSurface& surface, const ContactMetric& metric);

// First variation of the sub-Riemannian area under the flow of U:
//   int_Sigma [ -S(<U,T>) - 2 <J(U),S> + |N_h| <nabla_Z U, Z>
//               + |N_h| <U,T> <tau(Z),Z> ] dSigma.
// Refuses when a singular sample lies inside the support of U.
double first_variation_general(const ParamSurface& surface, const ContactMetric& metric,
                               const AmbientField& U);
double first_variation_general(const ParamSurface& surface, const SurfaceFrame& frame,
                               const ContactMetric& metric, const AmbientField& U);

// Centered difference (A(phi_s) - A(phi_{-s}))/(2 s); sample points and
// tangent frames advected by one fourth-order step of the flow of U.
double flow_area_derivative(const ParamSurface& surface, const ContactMetric& metric,
                            const AmbientField& U, double s_step);

// H = -<nabla_Z nu_h, Z> per sample; NaN at singular samples. Directional
// derivatives by parameter-space advection with bicubic interpolation.
std::vector<double> mean_curvature(const ParamSurface& surface, const ContactMetric& metric);

// Ratio of the area variation to the flow derivative of the enclosed volume
// (density det G) for the test field U0.
double h0_estimate(const ParamSurface& surface, const ContactMetric& metric,
                   const AmbientField& U0);

// Flow derivative of the enclosed volume: int_Sigma sqrt(det G) <U, N_out> dSigma.
double volume_flow_derivative(const ParamSurface& surface, const ContactMetric& metric,
                              const AmbientField& U);

// CSV of (sigma1, sigma2, x, y, t).
ParamSurface read_surface_csv(const std::string& path);
void write_surface_csv(const std::string& path, const ParamSurface& surface);

}  // namespace csr

#endif
