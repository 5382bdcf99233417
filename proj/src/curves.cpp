#include "csr/curves.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "csr/bicubic.hpp"
#include "csr/io.hpp"

namespace csr {

namespace {

struct CharState {
    double t, q;
};

struct JointTrace {
    std::vector<double> s, t, q;
    int anchor = 0;
    bool clipped = false;
};

// One classical RK4 step of the pair t' = 2 u(s, t), q' = 2 u_t(s, t) q.
CharState rk4_step(const Bicubic& u, double s, const CharState& y, double h) {
    auto rhs = [&](double ss, const CharState& yy) -> CharState {
        return {2.0 * u.eval(ss, yy.t), 2.0 * u.eval_dt(ss, yy.t) * yy.q};
    };
    const CharState k1 = rhs(s, y);
    const CharState k2 = rhs(s + 0.5 * h, {y.t + 0.5 * h * k1.t, y.q + 0.5 * h * k1.q});
    const CharState k3 = rhs(s + 0.5 * h, {y.t + 0.5 * h * k2.t, y.q + 0.5 * h * k2.q});
    const CharState k4 = rhs(s + h, {y.t + h * k3.t, y.q + h * k3.q});
    return {y.t + h / 6.0 * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t),
            y.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q)};
}

// Integrates one side; appends nothing for k = 0. Returns false when the
// curve left the domain (clipped).
bool integrate_side(const Bicubic& u, const GraphDomain& dom, double a, double b, int nsteps,
                    double h, std::vector<CharState>& out, std::vector<double>& svals) {
    CharState y{b, 1.0};
    double s = a;
    for (int k = 0; k < nsteps; ++k) {
        CharState next;
        try {
            next = rk4_step(u, s, y, h);
        } catch (const NumericError&) {
            return false;  // an integrator stage left the padded grid
        }
        const double s_next = a + (k + 1) * h;
        if (next.t < dom.t0 || next.t > dom.t1 || s_next < dom.x0 || s_next > dom.x1)
            return false;
        y = next;
        s = s_next;
        out.push_back(y);
        svals.push_back(s);
    }
    return true;
}

JointTrace integrate_characteristic(const IntrinsicGraph& graph, double a, double b,
                                    double halfwidth, double step) {
    const GraphDomain& dom = graph.domain();
    if (!(step > 0.0) || !(halfwidth > 0.0))
        throw std::invalid_argument("trace needs positive halfwidth and step");
    if (a <= dom.x0 || a >= dom.x1 || b <= dom.t0 || b >= dom.t1)
        throw std::invalid_argument("trace start must be interior to the domain");
    const Bicubic u(dom, graph.u());
    const int nsteps = std::max(1, static_cast<int>(std::lround(halfwidth / step)));

    std::vector<CharState> fwd, bwd;
    std::vector<double> s_fwd, s_bwd;
    JointTrace tr;
    tr.clipped = !integrate_side(u, dom, a, b, nsteps, step, fwd, s_fwd);
    tr.clipped = !integrate_side(u, dom, a, b, nsteps, -step, bwd, s_bwd) || tr.clipped;

    const int nb = static_cast<int>(bwd.size());
    tr.anchor = nb;
    tr.s.reserve(nb + 1 + fwd.size());
    tr.t.reserve(tr.s.capacity());
    tr.q.reserve(tr.s.capacity());
    for (int k = nb - 1; k >= 0; --k) {
        tr.s.push_back(s_bwd[k]);
        tr.t.push_back(bwd[k].t);
        tr.q.push_back(bwd[k].q);
    }
    tr.s.push_back(a);
    tr.t.push_back(b);
    tr.q.push_back(1.0);
    for (std::size_t k = 0; k < fwd.size(); ++k) {
        tr.s.push_back(s_fwd[k]);
        tr.t.push_back(fwd[k].t);
        tr.q.push_back(fwd[k].q);
    }
    return tr;
}

}  // namespace

CharacteristicCurve trace(const IntrinsicGraph& graph, double a, double b, double halfwidth,
                          double step) {
    JointTrace tr = integrate_characteristic(graph, a, b, halfwidth, step);
    CharacteristicCurve c;
    c.a = a;
    c.b = b;
    c.halfwidth = halfwidth;
    c.step = step;
    c.anchor = tr.anchor;
    c.clipped = tr.clipped;
    c.s = std::move(tr.s);
    c.t = std::move(tr.t);
    const Bicubic u(graph.domain(), graph.u());
    c.lift.resize(c.s.size());
    for (int i = 0; i < c.size(); ++i) {
        const double uv = u.eval(c.s[i], c.t[i]);
        c.lift[i] = Point3{c.s[i], uv, c.t[i] - c.s[i] * uv};
    }
    return c;
}

void foliation_jacobian(const IntrinsicGraph& graph, CharacteristicCurve& curve) {
    if (curve.size() == 0) throw std::invalid_argument("curve has not been traced");
    JointTrace tr = integrate_characteristic(graph, curve.a, curve.b, curve.halfwidth,
                                             curve.step);
    if (tr.s.size() != curve.s.size())
        throw NumericError("foliation integration does not match the traced curve");
    curve.q = std::move(tr.q);
}

double retrace_error(const IntrinsicGraph& graph, double a, double b, double halfwidth,
                     double step) {
    const GraphDomain& dom = graph.domain();
    const Bicubic u(dom, graph.u());
    const int nsteps = std::max(1, static_cast<int>(std::lround(halfwidth / step)));
    std::vector<CharState> fwd;
    std::vector<double> s_fwd;
    if (!integrate_side(u, dom, a, b, nsteps, step, fwd, s_fwd) || fwd.empty())
        throw NumericError("forward trace left the domain");
    CharState y{fwd.back().t, 1.0};
    const double s_end = s_fwd.back();
    const int n = static_cast<int>(fwd.size());
    for (int k = 0; k < n; ++k) y = rk4_step(u, s_end - k * step, y, -step);
    return std::abs(y.t - b);
}

bool uniqueness_check(const IntrinsicGraph& graph, double a, double b, double halfwidth,
                      double step, double tol) {
    return retrace_error(graph, a, b, halfwidth, step) <= tol;
}

RegularityReport regularity_diagnostic(const IntrinsicGraph& graph, const ContactMetric& metric,
                                       const ScalarField& f, CharacteristicCurve& curve,
                                       FunctionalSign sign) {
    const int n = curve.size();
    if (n < 7) throw std::invalid_argument("curve too short for the diagnostic");
    const HorizontalData fields = k1_m_k_fields(graph, metric, f, sign);
    const Bicubic Mfield(graph.domain(), fields.M);
    const Bicubic Kfield(graph.domain(), fields.K);
    curve.M.resize(n);
    curve.K.resize(n);
    for (int i = 0; i < n; ++i) {
        curve.M[i] = Mfield.eval(curve.s[i], curve.t[i]);
        curve.K[i] = Kfield.eval(curve.s[i], curve.t[i]);
    }
    RegularityReport rep;
    rep.residual.assign(n, 0.0);
    const double h = curve.step;
    rep.residual[0] = (curve.M[1] - curve.M[0]) / h - curve.K[0];
    rep.residual[n - 1] = (curve.M[n - 1] - curve.M[n - 2]) / h - curve.K[n - 1];
    for (int i = 1; i < n - 1; ++i)
        rep.residual[i] = (curve.M[i + 1] - curve.M[i - 1]) / (2.0 * h) - curve.K[i];
    double sup = 0.0;
    for (int i = 2; i <= n - 3; ++i) sup = std::max(sup, std::abs(rep.residual[i]));
    rep.sup = sup;
    return rep;
}

namespace {

// Frame data along the lifted curve used by the geodesic residuals.
struct CurveFrame {
    std::vector<PointFrame> frame;
    std::vector<Vec3> Z;        // unit characteristic direction, coordinates
    std::vector<Vec3> Zt;       // Gamma' = X + w Y = a Z
    std::vector<Vec3> nu_h;     // unit horizontal normal
    std::vector<double> a;      // |Z~|
};

CurveFrame curve_frame(const IntrinsicGraph& graph, const ContactMetric& metric,
                       const CharacteristicCurve& curve) {
    const int n = curve.size();
    const Bicubic u(graph.domain(), graph.u());
    CurveFrame cf;
    cf.frame.reserve(n);
    cf.Z.resize(n);
    cf.Zt.resize(n);
    cf.nu_h.resize(n);
    cf.a.resize(n);
    for (int i = 0; i < n; ++i) {
        const double s = curve.s[i], t = curve.t[i];
        const double uv = u.eval(s, t);
        const double w = u.eval_dx(s, t) + 2.0 * uv * u.eval_dt(s, t);
        const Point3 p{s, uv, t - s * uv};
        cf.frame.push_back(make_point_frame(metric, p));
        const PointFrame& fr = cf.frame.back();
        const double g11 = fr.G(0, 0), g12 = fr.G(0, 1), g22 = fr.G(1, 1);
        const double a2 = g22 * w * w + 2.0 * g12 * w + g11;
        const double a = std::sqrt(a2);
        const Vec3 X = frame_x(p), Y = frame_y(p);
        cf.a[i] = a;
        cf.Zt[i] = X + w * Y;
        cf.Z[i] = cf.Zt[i] / a;
        const Vec2 ab = fr.sqrtDetG * (fr.G.inverse() * Vec2(w, -1.0));
        cf.nu_h[i] = (ab.x() * X + ab.y() * Y) / a;
    }
    return cf;
}

// nabla_Z V along the curve by centered divided differences of the sampled
// coordinate components of V; valid for 1 <= i <= n-2.
Vec3 nabla_Z_along(const CurveFrame& cf, const std::vector<Vec3>& V, int i, double h) {
    const Vec3 dV = (V[i + 1] - V[i - 1]) / (2.0 * h);
    const Vec3 cov = dV + cf.frame[i].gamma_apply(cf.Zt[i], V[i]) +
                     cf.frame[i].contorsion(cf.Zt[i], V[i]);
    return cov / cf.a[i];
}

}  // namespace

double geodesic_check(const IntrinsicGraph& graph, const ContactMetric& metric,
                      const CharacteristicCurve& curve, const std::vector<double>& H) {
    const int n = curve.size();
    if (n < 7) throw std::invalid_argument("curve too short for the geodesic check");
    if (static_cast<int>(H.size()) != n)
        throw std::invalid_argument("H samples do not match the curve");
    const CurveFrame cf = curve_frame(graph, metric, curve);
    double sup = 0.0;
    for (int i = 2; i <= n - 3; ++i) {
        const Vec3 r = nabla_Z_along(cf, cf.Z, i, curve.step) - H[i] * cf.nu_h[i];
        sup = std::max(sup, cf.frame[i].norm(r));
    }
    return sup;
}

double geodesic_recursion_check(const IntrinsicGraph& graph, const ContactMetric& metric,
                                const CharacteristicCurve& curve,
                                const std::vector<double>& H) {
    const int n = curve.size();
    if (n < 9) throw std::invalid_argument("curve too short for the recursion check");
    if (static_cast<int>(H.size()) != n)
        throw std::invalid_argument("H samples do not match the curve");
    const CurveFrame cf = curve_frame(graph, metric, curve);
    std::vector<Vec3> W(n, Vec3::Zero());
    for (int i = 1; i <= n - 2; ++i) W[i] = nabla_Z_along(cf, cf.Z, i, curve.step);
    double sup = 0.0;
    for (int i = 3; i <= n - 4; ++i) {
        const Vec3 lhs = nabla_Z_along(cf, W, i, curve.step);
        const double ZH = (H[i + 1] - H[i - 1]) / (2.0 * curve.step) / cf.a[i];
        const Vec3 rhs = ZH * cf.nu_h[i] - H[i] * H[i] * cf.Z[i];
        sup = std::max(sup, cf.frame[i].norm(lhs - rhs));
    }
    return sup;
}

double lift_horizontality_residual(const IntrinsicGraph& graph,
                                   const CharacteristicCurve& curve) {
    (void)graph;
    const int n = curve.size();
    if (n < 3) throw std::invalid_argument("curve too short");
    double sup = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        const double tprime = (curve.t[i + 1] - curve.t[i - 1]) / (2.0 * curve.step);
        sup = std::max(sup, std::abs(tprime - 2.0 * curve.lift[i].y));
    }
    return sup;
}

void write_curve_csv(const std::string& path, const CharacteristicCurve& curve,
                     const RegularityReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "s,t,q,M,K,dMdxi_minus_K\n";
    const int n = curve.size();
    auto at = [](const std::vector<double>& v, int i) {
        return i < static_cast<int>(v.size()) ? v[i] : 0.0;
    };
    for (int i = 0; i < n; ++i)
        out << format17(curve.s[i]) << ',' << format17(curve.t[i]) << ','
            << format17(at(curve.q, i)) << ',' << format17(at(curve.M, i)) << ','
            << format17(at(curve.K, i)) << ',' << format17(at(report.residual, i)) << '\n';
}

}  // namespace csr
