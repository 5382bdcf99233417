#ifndef CSR_GRAPH_HPP
#define CSR_GRAPH_HPP

#include <functional>
#include <string>
#include <vector>

#include "csr/geometry.hpp"

// Intrinsic graphs over the vertical plane y = 0: a gridded function u(x, t)
// on a rectangle, embedded by f_u(x, t) = (x, u, t - x u). Carries the
// sub-Riemannian area, the prescribed-mean-curvature functional and the
// first-variation fields K1, M, K.

namespace csr {

struct GraphDomain {
    double x0 = 0.0, x1 = 1.0, t0 = 0.0, t1 = 1.0;
    int nx = 3, nt = 3;

    GraphDomain() = default;
    GraphDomain(double x0_, double x1_, double t0_, double t1_, int nx_, int nt_);

    double hx() const { return (x1 - x0) / (nx - 1); }
    double ht() const { return (t1 - t0) / (nt - 1); }
    double x(int i) const { return x0 + i * hx(); }
    double t(int j) const { return t0 + j * ht(); }
    // Node ordering is row-major in t (t is the fastest index).
    int idx(int i, int j) const { return i * nt + j; }
    int size() const { return nx * nt; }
    bool interior(int i, int j) const {
        return i > 0 && i < nx - 1 && j > 0 && j < nt - 1;
    }
};

class IntrinsicGraph {
public:
    IntrinsicGraph(GraphDomain dom, std::vector<double> u);
    static IntrinsicGraph sample(GraphDomain dom,
                                 const std::function<double(double, double)>& u);
    // Samples a field at y = 0 (u given as an expression in x and t).
    static IntrinsicGraph sample(GraphDomain dom, const ScalarField& u);

    const GraphDomain& domain() const { return dom_; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& ux() const { return ux_; }
    const std::vector<double>& ut() const { return ut_; }
    double u(int i, int j) const { return u_[dom_.idx(i, j)]; }
    double ux(int i, int j) const { return ux_[dom_.idx(i, j)]; }
    double ut(int i, int j) const { return ut_[dom_.idx(i, j)]; }

private:
    GraphDomain dom_;
    std::vector<double> u_, ux_, ut_;
};

// Second-order derivative stencils on the grid (central in the interior,
// one-sided at the boundary), applied along x or t.
std::vector<double> apply_dx(const GraphDomain& dom, const std::vector<double>& v);
std::vector<double> apply_dt(const GraphDomain& dom, const std::vector<double>& v);

// Composite trapezoid weight of node (i, j).
double quad_weight(const GraphDomain& dom, int i, int j);

enum class FunctionalSign {
    AreaMinusVolume,  // area - int_E f  (default convention)
    AreaPlusVolume,
};

// Per-node fields of the first variation. All metric data is composed with
// the embedding f_u.
struct HorizontalData {
    std::vector<double> w;     // u_x + 2 u u_t
    std::vector<double> a;     // (g22 w^2 + 2 g12 w + g11)^{1/2}, the area integrand
    std::vector<double> M;     // (g22 w + g12) / a = <Z, Y>
    std::vector<double> K1;
    std::vector<double> K;     // K1 -/+ f det(G)
    std::vector<double> detG;
};

Point3 embed(const IntrinsicGraph& graph, int i, int j);
std::vector<double> w_field(const IntrinsicGraph& graph);

double area(const IntrinsicGraph& graph, const ContactMetric& metric);

// Signed volume of the subgraph between 0 and u with the density det(G):
//   int_D int_0^u det(G)(x, s, t - x s) ds dx dt.
double volume(const IntrinsicGraph& graph, const ContactMetric& metric, double tol = 1e-10);

double pmc_value(const IntrinsicGraph& graph, const ContactMetric& metric,
                 const ScalarField& f, FunctionalSign sign = FunctionalSign::AreaMinusVolume,
                 double tol = 1e-10);

HorizontalData k1_m_k_fields(const IntrinsicGraph& graph, const ContactMetric& metric,
                             const ScalarField& f,
                             FunctionalSign sign = FunctionalSign::AreaMinusVolume);

// Quadrature of K v + M (v_x + 2 u v_t + 2 v u_t) over D for a nodal test
// vector v vanishing on the boundary.
double first_variation(const IntrinsicGraph& graph, const ContactMetric& metric,
                       const ScalarField& f, const std::vector<double>& v,
                       FunctionalSign sign = FunctionalSign::AreaMinusVolume);

// Frame components (alpha, beta, gamma) of the non-normalized normal
// N~ = E1 x E2; (alpha, beta) = det(G)^{1/2} G^{-1} (w, -1)^T, gamma = det(G)^{1/2} u_t.
Vec3 horizontal_normal(const IntrinsicGraph& graph, const ContactMetric& metric, int i, int j);

// (<Z, X>, <Z, Y>) of the unit characteristic direction.
Vec2 characteristic_frame(const IntrinsicGraph& graph, const ContactMetric& metric, int i,
                          int j);

void write_grid_csv(const std::string& path, const IntrinsicGraph& graph);
IntrinsicGraph read_grid_csv(const std::string& path);

}  // namespace csr

#endif
