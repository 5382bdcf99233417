#include "csr/graph.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csr/io.hpp"
#include "csr/quadrature.hpp"

namespace csr {

GraphDomain::GraphDomain(double x0_, double x1_, double t0_, double t1_, int nx_, int nt_)
    : x0(x0_), x1(x1_), t0(t0_), t1(t1_), nx(nx_), nt(nt_) {
    if (nx < 3 || nt < 3) throw std::invalid_argument("grid sizes must be >= 3");
    if (!(x1 > x0) || !(t1 > t0)) throw std::invalid_argument("empty domain rectangle");
}

IntrinsicGraph::IntrinsicGraph(GraphDomain dom, std::vector<double> u)
    : dom_(dom), u_(std::move(u)) {
    if (static_cast<int>(u_.size()) != dom_.size())
        throw std::invalid_argument("node count does not match grid");
    for (double v : u_)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite graph samples");
    ux_ = apply_dx(dom_, u_);
    ut_ = apply_dt(dom_, u_);
}

IntrinsicGraph IntrinsicGraph::sample(GraphDomain dom,
                                      const std::function<double(double, double)>& u) {
    std::vector<double> vals(dom.size());
    for (int i = 0; i < dom.nx; ++i)
        for (int j = 0; j < dom.nt; ++j) vals[dom.idx(i, j)] = u(dom.x(i), dom.t(j));
    return IntrinsicGraph(dom, std::move(vals));
}

IntrinsicGraph IntrinsicGraph::sample(GraphDomain dom, const ScalarField& u) {
    return sample(dom, [&](double x, double t) { return u(Point3{x, 0.0, t}); });
}

std::vector<double> apply_dx(const GraphDomain& dom, const std::vector<double>& v) {
    std::vector<double> r(v.size());
    const double h2 = 2.0 * dom.hx();
    for (int j = 0; j < dom.nt; ++j) {
        r[dom.idx(0, j)] =
            (-3.0 * v[dom.idx(0, j)] + 4.0 * v[dom.idx(1, j)] - v[dom.idx(2, j)]) / h2;
        for (int i = 1; i < dom.nx - 1; ++i)
            r[dom.idx(i, j)] = (v[dom.idx(i + 1, j)] - v[dom.idx(i - 1, j)]) / h2;
        r[dom.idx(dom.nx - 1, j)] = (3.0 * v[dom.idx(dom.nx - 1, j)] -
                                     4.0 * v[dom.idx(dom.nx - 2, j)] + v[dom.idx(dom.nx - 3, j)]) /
                                    h2;
    }
    return r;
}

std::vector<double> apply_dt(const GraphDomain& dom, const std::vector<double>& v) {
    std::vector<double> r(v.size());
    const double h2 = 2.0 * dom.ht();
    for (int i = 0; i < dom.nx; ++i) {
        r[dom.idx(i, 0)] =
            (-3.0 * v[dom.idx(i, 0)] + 4.0 * v[dom.idx(i, 1)] - v[dom.idx(i, 2)]) / h2;
        for (int j = 1; j < dom.nt - 1; ++j)
            r[dom.idx(i, j)] = (v[dom.idx(i, j + 1)] - v[dom.idx(i, j - 1)]) / h2;
        r[dom.idx(i, dom.nt - 1)] = (3.0 * v[dom.idx(i, dom.nt - 1)] -
                                     4.0 * v[dom.idx(i, dom.nt - 2)] +
                                     v[dom.idx(i, dom.nt - 3)]) /
                                    h2;
    }
    return r;
}

double quad_weight(const GraphDomain& dom, int i, int j) {
    const double cx = (i == 0 || i == dom.nx - 1) ? 0.5 : 1.0;
    const double ct = (j == 0 || j == dom.nt - 1) ? 0.5 : 1.0;
    return dom.hx() * dom.ht() * cx * ct;
}

Point3 embed(const IntrinsicGraph& graph, int i, int j) {
    const auto& d = graph.domain();
    const double x = d.x(i), t = d.t(j), u = graph.u(i, j);
    return Point3{x, u, t - x * u};
}

std::vector<double> w_field(const IntrinsicGraph& graph) {
    const auto& d = graph.domain();
    std::vector<double> w(d.size());
    for (int k = 0; k < d.size(); ++k) w[k] = graph.ux()[k] + 2.0 * graph.u()[k] * graph.ut()[k];
    return w;
}

namespace {

double area_integrand(double g11, double g12, double g22, double w) {
    const double a2 = g22 * w * w + 2.0 * g12 * w + g11;
    if (!(a2 > 0.0)) throw NumericError("degenerate metric on the graph image");
    return std::sqrt(a2);
}

}  // namespace

double area(const IntrinsicGraph& graph, const ContactMetric& metric) {
    const auto& d = graph.domain();
    const std::vector<double> w = w_field(graph);
    double sum = 0.0;
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.nt; ++j) {
            const Point3 p = embed(graph, i, j);
            sum += quad_weight(d, i, j) *
                   area_integrand(metric.g11()(p), metric.g12()(p), metric.g22()(p),
                                  w[d.idx(i, j)]);
        }
    return sum;
}

namespace {

// int_D int_0^u rho(x, s, t - x s) ds dx dt for a compiled density rho.
double subgraph_integral(const IntrinsicGraph& graph, const CompiledExpr& density,
                         double tol) {
    const auto& d = graph.domain();
    double sum = 0.0;
    for (int i = 0; i < d.nx; ++i) {
        const double x = d.x(i);
        for (int j = 0; j < d.nt; ++j) {
            const double t = d.t(j);
            const double inner = adaptive_simpson(
                [&](double s) { return density.evaluate(Point3{x, s, t - x * s}); }, 0.0,
                graph.u(i, j), tol);
            sum += quad_weight(d, i, j) * inner;
        }
    }
    return sum;
}

}  // namespace

double volume(const IntrinsicGraph& graph, const ContactMetric& metric, double tol) {
    return subgraph_integral(graph, CompiledExpr(metric.det_field().expression()), tol);
}

double pmc_value(const IntrinsicGraph& graph, const ContactMetric& metric, const ScalarField& f,
                 FunctionalSign sign, double tol) {
    const CompiledExpr density(f.expression() * metric.det_field().expression());
    const double vol = subgraph_integral(graph, density, tol);
    const double s = sign == FunctionalSign::AreaMinusVolume ? -1.0 : 1.0;
    return area(graph, metric) + s * vol;
}

HorizontalData k1_m_k_fields(const IntrinsicGraph& graph, const ContactMetric& metric,
                             const ScalarField& f, FunctionalSign sign) {
    const auto& d = graph.domain();
    const double fsign = sign == FunctionalSign::AreaMinusVolume ? -1.0 : 1.0;
    HorizontalData h;
    h.w = w_field(graph);
    h.a.resize(d.size());
    h.M.resize(d.size());
    h.K1.resize(d.size());
    h.K.resize(d.size());
    h.detG.resize(d.size());
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.nt; ++j) {
            const int k = d.idx(i, j);
            const Point3 p = embed(graph, i, j);
            const double g11 = metric.g11()(p), g12 = metric.g12()(p), g22 = metric.g22()(p);
            const double w = h.w[k];
            const double a = area_integrand(g11, g12, g22, w);
            const double Yg11 = frame_y_derivative(metric.g11(), p);
            const double Yg12 = frame_y_derivative(metric.g12(), p);
            const double Yg22 = frame_y_derivative(metric.g22(), p);
            h.a[k] = a;
            h.M[k] = (g22 * w + g12) / a;
            h.K1[k] = 0.5 * (Yg22 * w * w + 2.0 * Yg12 * w + Yg11) / a;
            h.detG[k] = g11 * g22 - g12 * g12;
            h.K[k] = h.K1[k] + fsign * f(p) * h.detG[k];
        }
    return h;
}

double first_variation(const IntrinsicGraph& graph, const ContactMetric& metric,
                       const ScalarField& f, const std::vector<double>& v,
                       FunctionalSign sign) {
    const auto& d = graph.domain();
    if (static_cast<int>(v.size()) != d.size())
        throw std::invalid_argument("test vector does not match grid");
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.nt; ++j)
            if (!d.interior(i, j) && std::abs(v[d.idx(i, j)]) > 1e-14)
                throw std::invalid_argument("test function is not compactly supported");
    const HorizontalData h = k1_m_k_fields(graph, metric, f, sign);
    const std::vector<double> vx = apply_dx(d, v);
    const std::vector<double> vt = apply_dt(d, v);
    double sum = 0.0;
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.nt; ++j) {
            const int k = d.idx(i, j);
            sum += quad_weight(d, i, j) *
                   (h.K[k] * v[k] +
                    h.M[k] * (vx[k] + 2.0 * graph.u()[k] * vt[k] + 2.0 * v[k] * graph.ut()[k]));
        }
    return sum;
}

Vec3 horizontal_normal(const IntrinsicGraph& graph, const ContactMetric& metric, int i, int j) {
    const Point3 p = embed(graph, i, j);
    const Mat2 G = metric.horizontal(p);
    const double s = std::sqrt(G.determinant());
    const double w = graph.ux(i, j) + 2.0 * graph.u(i, j) * graph.ut(i, j);
    const Vec2 ab = s * (G.inverse() * Vec2(w, -1.0));
    return Vec3(ab.x(), ab.y(), s * graph.ut(i, j));
}

Vec2 characteristic_frame(const IntrinsicGraph& graph, const ContactMetric& metric, int i,
                          int j) {
    const Point3 p = embed(graph, i, j);
    const Mat2 G = metric.horizontal(p);
    const double g11 = G(0, 0), g12 = G(0, 1), g22 = G(1, 1);
    const double detG = G.determinant();
    const double w = graph.ux(i, j) + 2.0 * graph.u(i, j) * graph.ut(i, j);
    const double a = area_integrand(g11, g12, g22, w);
    const double zy = (g22 * w + g12) / a;
    // Positive root branch: the X-component of Z~ = X + w Y is positive.
    const double rad = std::max(detG * (g22 - zy * zy), 0.0);
    const double zx = (g12 * zy + std::sqrt(rad)) / g22;
    return Vec2(zx, zy);
}

void write_grid_csv(const std::string& path, const IntrinsicGraph& graph) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "x,t,u\n";
    const auto& d = graph.domain();
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.nt; ++j)
            out << format17(d.x(i)) << ',' << format17(d.t(j)) << ','
                << format17(graph.u(i, j)) << '\n';
}

IntrinsicGraph read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty grid file " + path);
    std::vector<double> xs, ts, us;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[3];
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("bad grid row: " + line);
            vals[c] = std::stod(cell);
        }
        xs.push_back(vals[0]);
        ts.push_back(vals[1]);
        us.push_back(vals[2]);
    }
    if (us.size() < 9) throw std::runtime_error("grid file too small: " + path);
    // Rows are x-outer, t-inner; nt = run length of the leading x value.
    int nt = 1;
    while (nt < static_cast<int>(xs.size()) && xs[nt] == xs[0]) ++nt;
    const int n = static_cast<int>(xs.size());
    if (nt < 3 || n % nt != 0) throw std::runtime_error("grid file is not a full grid: " + path);
    const int nx = n / nt;
    GraphDomain dom(xs.front(), xs.back(), ts.front(), ts[nt - 1], nx, nt);
    return IntrinsicGraph(dom, std::move(us));
}

}  // namespace csr
