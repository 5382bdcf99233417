#include "csr/variation.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "csr/bicubic.hpp"
#include "csr/io.hpp"

namespace csr {

ParamSurface ParamSurface::from_jets(
    const GraphDomain& grid,
    const std::function<void(double, double, Point3&, Vec3&, Vec3&)>& jet) {
    ParamSurface s;
    s.grid = grid;
    s.pos.resize(grid.size());
    s.d1.resize(grid.size());
    s.d2.resize(grid.size());
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.nt; ++j) {
            const int k = grid.idx(i, j);
            jet(grid.x(i), grid.t(j), s.pos[k], s.d1[k], s.d2[k]);
        }
    return s;
}

ParamSurface ParamSurface::from_positions(const GraphDomain& grid, std::vector<Point3> pos) {
    if (static_cast<int>(pos.size()) != grid.size())
        throw std::invalid_argument("positions do not match the parameter grid");
    ParamSurface s;
    s.grid = grid;
    s.pos = std::move(pos);
    std::vector<double> comp(grid.size());
    s.d1.assign(grid.size(), Vec3::Zero());
    s.d2.assign(grid.size(), Vec3::Zero());
    for (int c = 0; c < 3; ++c) {
        for (int k = 0; k < grid.size(); ++k)
            comp[k] = c == 0 ? s.pos[k].x : c == 1 ? s.pos[k].y : s.pos[k].t;
        const std::vector<double> dc1 = apply_dx(grid, comp);
        const std::vector<double> dc2 = apply_dt(grid, comp);
        for (int k = 0; k < grid.size(); ++k) {
            s.d1[k](c) = dc1[k];
            s.d2[k](c) = dc2[k];
        }
    }
    return s;
}

ParamSurface ParamSurface::from_graph(const IntrinsicGraph& graph) {
    const GraphDomain& d = graph.domain();
    ParamSurface s;
    s.grid = d;
    s.pos.resize(d.size());
    s.d1.resize(d.size());
    s.d2.resize(d.size());
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.nt; ++j) {
            const int k = d.idx(i, j);
            const double x = d.x(i), u = graph.u(i, j);
            const double ux = graph.ux(i, j), ut = graph.ut(i, j);
            s.pos[k] = embed(graph, i, j);
            s.d1[k] = Vec3(1.0, ux, -u - x * ux);
            s.d2[k] = Vec3(0.0, ut, 1.0 - x * ut);
        }
    return s;
}

ParamSurface ParamSurface::graph_surface(const GraphDomain& grid, const ScalarField& u) {
    return from_jets(grid, [&](double x, double t, Point3& p, Vec3& d1, Vec3& d2) {
        const Point3 q{x, 0.0, t};
        const double uv = u(q), ux = u.dx(q), ut = u.dt(q);
        p = Point3{x, uv, t - x * uv};
        d1 = Vec3(1.0, ux, -uv - x * ux);
        d2 = Vec3(0.0, ut, 1.0 - x * ut);
    });
}

ParamSurface ParamSurface::vertical_plane(const GraphDomain& grid) {
    return from_jets(grid, [](double s1, double s2, Point3& p, Vec3& d1, Vec3& d2) {
        p = Point3{s1, 0.0, s2};
        d1 = Vec3(1.0, 0.0, 0.0);
        d2 = Vec3(0.0, 0.0, 1.0);
    });
}

ParamSurface ParamSurface::flipped() const {
    ParamSurface s = *this;
    s.normal_sign = -normal_sign;
    return s;
}

SurfaceFrame surface_frame(const ParamSurface& surface, const ContactMetric& metric,
                           double eps_sing) {
    const int n = surface.grid.size();
    SurfaceFrame f;
    f.at.reserve(n);
    f.dSigma.resize(n);
    f.N.resize(n);
    f.NT.resize(n);
    f.Nh_norm.resize(n);
    f.nu_h.assign(n, Vec3::Zero());
    f.Z.assign(n, Vec3::Zero());
    f.S.assign(n, Vec3::Zero());
    f.singular.assign(n, 0);
    for (int k = 0; k < n; ++k) {
        f.at.push_back(make_point_frame(metric, surface.pos[k]));
        const PointFrame& pf = f.at.back();
        const Vec3 Ntilde = pf.cross(surface.d1[k], surface.d2[k]);
        const double len = pf.norm(Ntilde);
        if (!(len * len > 1e-12)) throw NumericError("surface is not an immersion");
        f.dSigma[k] = len;
        const Vec3 N = surface.normal_sign * (Ntilde / len);
        f.N[k] = N;
        f.NT[k] = pf.vertical_component(N);
        const Vec3 Nh = pf.horizontal_part(N);
        const double nh = pf.norm(Nh);
        f.Nh_norm[k] = nh;
        if (nh < eps_sing) {
            f.singular[k] = 1;
            ++f.n_singular;
            continue;
        }
        f.nu_h[k] = Nh / nh;
        const Vec3 Jnu = pf.j_apply(f.nu_h[k]);
        const double jlen = pf.norm(Jnu);
        if (!(jlen > 0.0)) throw NumericError("J(nu_h) vanished at a regular point");
        f.Z[k] = Jnu / jlen;
        f.S[k] = f.NT[k] * f.nu_h[k] - nh * frame_t(surface.pos[k]);
    }
    return f;
}

namespace {

// C^infinity step: 0 for xi <= 0, 1 for xi >= 1.
double smooth_step(double xi) {
    if (xi <= 0.0) return 0.0;
    if (xi >= 1.0) return 1.0;
    const double e1 = std::exp(-1.0 / xi);
    const double e2 = std::exp(-1.0 / (1.0 - xi));
    return e1 / (e1 + e2);
}

double smooth_step_deriv(double xi) {
    if (xi <= 0.0 || xi >= 1.0) return 0.0;
    const double e1 = std::exp(-1.0 / xi);
    const double e2 = std::exp(-1.0 / (1.0 - xi));
    const double d1 = e1 / (xi * xi);
    const double d2 = e2 / ((1.0 - xi) * (1.0 - xi));
    const double s = e1 + e2;
    return (d1 * e2 + e1 * d2) / (s * s);
}

struct AxisCutoff {
    double value, deriv;
};

AxisCutoff axis_cutoff(double p, double lo, double hi, double margin) {
    const double m = margin * (hi - lo);
    const double rise = (p - lo) / m;
    const double fall = (hi - p) / m;
    const double vr = smooth_step(rise), vf = smooth_step(fall);
    const double dr = smooth_step_deriv(rise) / m, df = -smooth_step_deriv(fall) / m;
    return {vr * vf, dr * vf + vr * df};
}

}  // namespace

AmbientField::AmbientField(ScalarField x_comp, ScalarField y_comp, ScalarField t_comp,
                           Point3 lo, Point3 hi, double margin)
    : cx_(std::move(x_comp)), cy_(std::move(y_comp)), ct_(std::move(t_comp)), lo_(lo),
      hi_(hi), margin_(margin) {
    if (!(margin > 0.0) || margin > 0.5)
        throw std::invalid_argument("cutoff margin must be in (0, 0.5]");
    if (!(hi.x > lo.x) || !(hi.y > lo.y) || !(hi.t > lo.t))
        throw std::invalid_argument("empty support box");
}

double AmbientField::cutoff(const Point3& p) const {
    return axis_cutoff(p.x, lo_.x, hi_.x, margin_).value *
           axis_cutoff(p.y, lo_.y, hi_.y, margin_).value *
           axis_cutoff(p.t, lo_.t, hi_.t, margin_).value;
}

Vec3 AmbientField::value(const Point3& p) const {
    const double chi = cutoff(p);
    if (chi == 0.0) return Vec3::Zero();
    const double ux = cx_(p), uy = cy_(p), ut = ct_(p);
    return chi * Vec3(ux, uy, p.y * ux - p.x * uy + ut);
}

VectorFieldJet AmbientField::jet(const Point3& p) const {
    VectorFieldJet J;
    const AxisCutoff ax = axis_cutoff(p.x, lo_.x, hi_.x, margin_);
    const AxisCutoff ay = axis_cutoff(p.y, lo_.y, hi_.y, margin_);
    const AxisCutoff at = axis_cutoff(p.t, lo_.t, hi_.t, margin_);
    const double chi = ax.value * ay.value * at.value;
    if (chi == 0.0) return J;
    const Vec3 dchi(ax.deriv * ay.value * at.value, ax.value * ay.deriv * at.value,
                    ax.value * ay.value * at.deriv);
    const double ux = cx_(p), uy = cy_(p), ut = ct_(p);
    const auto gx = cx_.gradient(p), gy = cy_.gradient(p), gt = ct_.gradient(p);
    // Coordinate components before the cutoff: (w1, w2, w3).
    const Vec3 w(ux, uy, p.y * ux - p.x * uy + ut);
    Mat3 dw;  // dw(k, mu) = d w_k / d x_mu
    dw << gx[0], gx[1], gx[2],
          gy[0], gy[1], gy[2],
          p.y * gx[0] - uy - p.x * gy[0] + gt[0],
          ux + p.y * gx[1] - p.x * gy[1] + gt[1],
          p.y * gx[2] - p.x * gy[2] + gt[2];
    J.value = chi * w;
    J.jacobian = chi * dw + w * dchi.transpose();
    return J;
}

double AmbientField::vertical_component(const Point3& p) const {
    const double chi = cutoff(p);
    return chi == 0.0 ? 0.0 : chi * ct_(p);
}

Vec3 AmbientField::vertical_gradient(const Point3& p) const {
    const AxisCutoff ax = axis_cutoff(p.x, lo_.x, hi_.x, margin_);
    const AxisCutoff ay = axis_cutoff(p.y, lo_.y, hi_.y, margin_);
    const AxisCutoff at = axis_cutoff(p.t, lo_.t, hi_.t, margin_);
    const double chi = ax.value * ay.value * at.value;
    if (chi == 0.0 && ax.deriv == 0.0 && ay.deriv == 0.0 && at.deriv == 0.0)
        return Vec3::Zero();
    const Vec3 dchi(ax.deriv * ay.value * at.value, ax.value * ay.deriv * at.value,
                    ax.value * ay.value * at.deriv);
    const double ut = ct_(p);
    const auto gt = ct_.gradient(p);
    return ut * dchi + chi * Vec3(gt[0], gt[1], gt[2]);
}

double sr_area(const ParamSurface& surface, const ContactMetric& metric) {
    const SurfaceFrame f = surface_frame(surface, metric);
    double sum = 0.0;
    for (int i = 0; i < surface.grid.nx; ++i)
        for (int j = 0; j < surface.grid.nt; ++j) {
            const int k = surface.grid.idx(i, j);
            sum += quad_weight(surface.grid, i, j) * f.Nh_norm[k] * f.dSigma[k];
        }
    return sum;
}

double first_variation_general(const ParamSurface& surface, const SurfaceFrame& frame,
                               const ContactMetric& metric, const AmbientField& U) {
    (void)metric;
    double sum = 0.0;
    for (int i = 0; i < surface.grid.nx; ++i)
        for (int j = 0; j < surface.grid.nt; ++j) {
            const int k = surface.grid.idx(i, j);
            const Point3& p = surface.pos[k];
            if (frame.singular[k]) {
                if (U.in_support(p))
                    throw NumericError("singular point inside the support of the field");
                continue;
            }
            if (!U.in_support(p)) continue;
            const PointFrame& pf = frame.at[k];
            const VectorFieldJet Uj = U.jet(p);
            const double S_of_UT = frame.S[k].dot(U.vertical_gradient(p));
            const double JU_S = pf.inner(pf.j_apply(Uj.value), frame.S[k]);
            const Vec3 nablaZU =
                sr_connection(pf, VectorFieldJet{frame.Z[k], Mat3::Zero()}, Uj);
            const double grad_term = frame.Nh_norm[k] * pf.inner(nablaZU, frame.Z[k]);
            const double tau_term = frame.Nh_norm[k] * pf.vertical_component(Uj.value) *
                                    pf.inner(pf.tau_apply(frame.Z[k]), frame.Z[k]);
            const double density = -S_of_UT - 2.0 * JU_S + grad_term + tau_term;
            sum += quad_weight(surface.grid, i, j) * density * frame.dSigma[k];
        }
    return sum;
}

double first_variation_general(const ParamSurface& surface, const ContactMetric& metric,
                               const AmbientField& U) {
    const SurfaceFrame frame = surface_frame(surface, metric);
    return first_variation_general(surface, frame, metric, U);
}

namespace {

struct FlowState {
    Vec3 x;
    Vec3 v1, v2;
};

// d x / ds = U(x), d V / ds = DU(x) V (tangent vectors are Lie-dragged).
FlowState flow_rk4(const AmbientField& U, const FlowState& y, double h) {
    auto rhs = [&](const FlowState& s) -> FlowState {
        const VectorFieldJet j = U.jet(Point3{s.x(0), s.x(1), s.x(2)});
        return {j.value, j.jacobian * s.v1, j.jacobian * s.v2};
    };
    auto axpy = [](const FlowState& a, double c, const FlowState& b) -> FlowState {
        return {a.x + c * b.x, a.v1 + c * b.v1, a.v2 + c * b.v2};
    };
    const FlowState k1 = rhs(y);
    const FlowState k2 = rhs(axpy(y, 0.5 * h, k1));
    const FlowState k3 = rhs(axpy(y, 0.5 * h, k2));
    const FlowState k4 = rhs(axpy(y, h, k3));
    FlowState out = y;
    out.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.v1 += h / 6.0 * (k1.v1 + 2.0 * k2.v1 + 2.0 * k3.v1 + k4.v1);
    out.v2 += h / 6.0 * (k1.v2 + 2.0 * k2.v2 + 2.0 * k3.v2 + k4.v2);
    return out;
}

double flowed_area(const ParamSurface& surface, const ContactMetric& metric,
                   const AmbientField& U, double s) {
    double sum = 0.0;
    for (int i = 0; i < surface.grid.nx; ++i)
        for (int j = 0; j < surface.grid.nt; ++j) {
            const int k = surface.grid.idx(i, j);
            FlowState st{Vec3(surface.pos[k].x, surface.pos[k].y, surface.pos[k].t),
                         surface.d1[k], surface.d2[k]};
            st = flow_rk4(U, st, s);
            const Point3 p{st.x(0), st.x(1), st.x(2)};
            const PointFrame pf = make_point_frame(metric, p);
            const Vec3 Ntilde = pf.cross(st.v1, st.v2);
            if (!(pf.inner(Ntilde, Ntilde) > 1e-12))
                throw NumericError("immersion lost under the flow");
            sum += quad_weight(surface.grid, i, j) * pf.norm(pf.horizontal_part(Ntilde));
        }
    return sum;
}

}  // namespace

double flow_area_derivative(const ParamSurface& surface, const ContactMetric& metric,
                            const AmbientField& U, double s_step) {
    if (!(s_step > 0.0)) throw std::invalid_argument("flow step must be positive");
    const double ap = flowed_area(surface, metric, U, s_step);
    const double am = flowed_area(surface, metric, U, -s_step);
    return (ap - am) / (2.0 * s_step);
}

std::vector<double> mean_curvature(const ParamSurface& surface, const ContactMetric& metric) {
    const SurfaceFrame f = surface_frame(surface, metric);
    const GraphDomain& g = surface.grid;
    const int n = g.size();
    // Coordinate components of nu_h as interpolable nodal fields.
    std::vector<double> c0(n), c1(n), c2(n);
    for (int k = 0; k < n; ++k) {
        c0[k] = f.nu_h[k](0);
        c1[k] = f.nu_h[k](1);
        c2[k] = f.nu_h[k](2);
    }
    const Bicubic i0(g, c0), i1(g, c1), i2(g, c2);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> H(n, nan);
    const double hmin = std::min(g.hx(), g.ht());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nt; ++j) {
            const int k = g.idx(i, j);
            if (f.singular[k]) continue;
            const PointFrame& pf = f.at[k];
            // Z in the parameter tangent basis: Gram * c = (<Z,F1>, <Z,F2>).
            Mat2 gram;
            gram << pf.inner(surface.d1[k], surface.d1[k]),
                pf.inner(surface.d1[k], surface.d2[k]),
                pf.inner(surface.d2[k], surface.d1[k]),
                pf.inner(surface.d2[k], surface.d2[k]);
            const Vec2 rhs(pf.inner(f.Z[k], surface.d1[k]), pf.inner(f.Z[k], surface.d2[k]));
            const Vec2 c = gram.inverse() * rhs;
            const double cmax = std::max(std::abs(c(0)), std::abs(c(1)));
            if (!(cmax > 0.0)) continue;
            const double eps = 0.5 * hmin / cmax;
            const double s1 = g.x(i), s2 = g.t(j);
            const Vec3 plus(i0.eval(s1 + eps * c(0), s2 + eps * c(1)),
                            i1.eval(s1 + eps * c(0), s2 + eps * c(1)),
                            i2.eval(s1 + eps * c(0), s2 + eps * c(1)));
            const Vec3 minus(i0.eval(s1 - eps * c(0), s2 - eps * c(1)),
                             i1.eval(s1 - eps * c(0), s2 - eps * c(1)),
                             i2.eval(s1 - eps * c(0), s2 - eps * c(1)));
            const Vec3 dnu = (plus - minus) / (2.0 * eps);
            const Vec3 nabla = dnu + pf.gamma_apply(f.Z[k], f.nu_h[k]) +
                               pf.contorsion(f.Z[k], f.nu_h[k]);
            H[k] = -pf.inner(nabla, f.Z[k]);
        }
    return H;
}

double volume_flow_derivative(const ParamSurface& surface, const ContactMetric& metric,
                              const AmbientField& U) {
    const SurfaceFrame f = surface_frame(surface, metric);
    double sum = 0.0;
    for (int i = 0; i < surface.grid.nx; ++i)
        for (int j = 0; j < surface.grid.nt; ++j) {
            const int k = surface.grid.idx(i, j);
            const Point3& p = surface.pos[k];
            if (!U.in_support(p)) continue;
            const PointFrame& pf = f.at[k];
            const Vec3 N_out = -f.N[k];
            sum += quad_weight(surface.grid, i, j) * pf.sqrtDetG *
                   pf.inner(U.value(p), N_out) * f.dSigma[k];
        }
    return sum;
}

double h0_estimate(const ParamSurface& surface, const ContactMetric& metric,
                   const AmbientField& U0) {
    const double den = volume_flow_derivative(surface, metric, U0);
    if (std::abs(den) <= 1e-10)
        throw NumericError("volume derivative vanishes for the test field");
    return first_variation_general(surface, metric, U0) / den;
}

ParamSurface read_surface_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty surface file " + path);
    std::vector<double> s1, s2;
    std::vector<Point3> pos;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[5];
        for (int c = 0; c < 5; ++c) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("bad surface row: " + line);
            vals[c] = std::stod(cell);
        }
        s1.push_back(vals[0]);
        s2.push_back(vals[1]);
        pos.push_back(Point3{vals[2], vals[3], vals[4]});
    }
    int nt = 1;
    while (nt < static_cast<int>(s1.size()) && s1[nt] == s1[0]) ++nt;
    const int n = static_cast<int>(s1.size());
    if (nt < 3 || n % nt != 0)
        throw std::runtime_error("surface file is not a full grid: " + path);
    const int nx = n / nt;
    GraphDomain grid(s1.front(), s1.back(), s2.front(), s2[nt - 1], nx, nt);
    return ParamSurface::from_positions(grid, std::move(pos));
}

void write_surface_csv(const std::string& path, const ParamSurface& surface) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "sigma1,sigma2,x,y,t\n";
    const GraphDomain& g = surface.grid;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nt; ++j) {
            const Point3& p = surface.pos[g.idx(i, j)];
            out << format17(g.x(i)) << ',' << format17(g.t(j)) << ',' << format17(p.x) << ','
                << format17(p.y) << ',' << format17(p.t) << '\n';
        }
}

}  // namespace csr
