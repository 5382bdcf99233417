#include "csr/geometry.hpp"

#include <cmath>

namespace csr {

Mat3 frame_matrix(const Point3& p) {
    Mat3 F;
    F << 1.0, 0.0, 0.0,
         0.0, 1.0, 0.0,
         p.y, -p.x, 1.0;
    return F;
}

Mat3 frame_matrix_inverse(const Point3& p) {
    Mat3 Fi;
    Fi << 1.0, 0.0, 0.0,
          0.0, 1.0, 0.0,
          -p.y, p.x, 1.0;
    return Fi;
}

Mat3 CoordinateMetric::tensor(const Point3& p) const {
    Mat3 g;
    const double vxx = xx(p), vxy = xy(p), vxt = xt(p);
    const double vyy = yy(p), vyt = yt(p), vtt = tt(p);
    g << vxx, vxy, vxt,
         vxy, vyy, vyt,
         vxt, vyt, vtt;
    return g;
}

std::array<Mat3, 3> CoordinateMetric::tensor_partials(const Point3& p) const {
    std::array<Mat3, 3> dg;
    const ScalarField* fields[6] = {&xx, &xy, &xt, &yy, &yt, &tt};
    const int rows[6] = {0, 0, 0, 1, 1, 2};
    const int cols[6] = {0, 1, 2, 1, 2, 2};
    for (int mu = 0; mu < 3; ++mu) dg[mu].setZero();
    for (int e = 0; e < 6; ++e) {
        auto grad = fields[e]->gradient(p);
        for (int mu = 0; mu < 3; ++mu) {
            dg[mu](rows[e], cols[e]) = grad[mu];
            dg[mu](cols[e], rows[e]) = grad[mu];
        }
    }
    return dg;
}

Christoffels CoordinateMetric::christoffels(const Point3& p) const {
    const Mat3 g = tensor(p);
    const double det = g.determinant();
    if (!(det > 0.0)) throw NumericError("degenerate ambient metric");
    const Mat3 g_inv = g.inverse();
    const auto dg = tensor_partials(p);
    Christoffels gamma;
    for (int k = 0; k < 3; ++k) gamma[k].setZero();
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l)
                    s += g_inv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma[k](i, j) = 0.5 * s;
            }
    return gamma;
}

namespace {

// Coordinate components of the ambient metric from the frame data:
//   g_coord = F^{-T} diag(G, 1) F^{-1}
// which expands to
//   [ g11 + y^2   g12 - x y   -y ]
//   [ g12 - x y   g22 + x^2    x ]
//   [   -y            x        1 ].
CoordinateMetric build_coordinate_metric(const ScalarField& g11, const ScalarField& g12,
                                         const ScalarField& g22) {
    Expression x = Expression::variable(Var::X);
    Expression y = Expression::variable(Var::Y);
    CoordinateMetric cm;
    cm.xx = ScalarField(g11.expression() + y * y);
    cm.xy = ScalarField(g12.expression() - x * y);
    cm.xt = ScalarField(-y);
    cm.yy = ScalarField(g22.expression() + x * x);
    cm.yt = ScalarField(x);
    cm.tt = ScalarField(Expression::constant(1.0));
    return cm;
}

}  // namespace

ContactMetric::ContactMetric(ScalarField g11, ScalarField g12, ScalarField g22)
    : g11_(std::move(g11)), g12_(std::move(g12)), g22_(std::move(g22)) {
    det_ = ScalarField(g11_.expression() * g22_.expression() -
                       g12_.expression() * g12_.expression());
    coord_ = build_coordinate_metric(g11_, g12_, g22_);
}

ContactMetric ContactMetric::heisenberg() {
    return ContactMetric(ScalarField::constant(1.0), ScalarField::constant(0.0),
                         ScalarField::constant(1.0));
}

ContactMetric ContactMetric::from_strings(const std::string& g11, const std::string& g12,
                                          const std::string& g22) {
    return ContactMetric(ScalarField::parse(g11), ScalarField::parse(g12),
                         ScalarField::parse(g22));
}

Mat2 ContactMetric::horizontal(const Point3& p) const {
    Mat2 G;
    G << g11_(p), g12_(p), g12_(p), g22_(p);
    if (!(G(0, 0) > 0.0) || !(G.determinant() > 0.0))
        throw NumericError("horizontal metric not positive definite");
    return G;
}

double ContactMetric::det(const Point3& p) const { return det_(p); }

double PointFrame::norm(const Vec3& a_coord) const {
    return std::sqrt(std::max(0.0, inner(a_coord, a_coord)));
}

Vec3 PointFrame::cross(const Vec3& u, const Vec3& v) const {
    Vec3 w(u.y() * v.z() - u.z() * v.y(),
           u.z() * v.x() - u.x() * v.z(),
           u.x() * v.y() - u.y() * v.x());
    return g_inv * (sqrt_det_g * w);
}

Vec3 PointFrame::horizontal_part(const Vec3& v_coord) const {
    Vec3 c = to_frame(v_coord);
    c.z() = 0.0;
    return from_frame(c);
}

double PointFrame::vertical_component(const Vec3& v_coord) const {
    return to_frame(v_coord).z();
}

Vec3 PointFrame::d_dir_T(const Vec3& v_coord) const {
    // T has constant coordinate components, so D_v T = Gamma^k_{u t} v^u.
    Vec3 r;
    for (int k = 0; k < 3; ++k) r(k) = gamma[k].col(2).dot(v_coord);
    return r;
}

Vec3 PointFrame::j_apply(const Vec3& v_coord) const {
    return from_frame(J * to_frame(v_coord));
}

Vec3 PointFrame::tau_apply(const Vec3& v_coord) const {
    return from_frame(tau * to_frame(v_coord));
}

Vec3 PointFrame::torsion(const Vec3& a_coord, const Vec3& b_coord) const {
    const Vec3 a = to_frame(a_coord), b = to_frame(b_coord);
    const Vec2 ah(a.x(), a.y()), bh(b.x(), b.y());
    const Mat2 tau2 = tau.topLeftCorner<2, 2>();
    const Mat2 J2 = J.topLeftCorner<2, 2>();
    const Vec2 hor = a.z() * (tau2 * bh) - b.z() * (tau2 * ah);
    const double vert = 2.0 * (J2 * ah).dot(G * bh);
    return from_frame(Vec3(hor.x(), hor.y(), vert));
}

Vec3 PointFrame::contorsion(const Vec3& a_coord, const Vec3& b_coord) const {
    // g(K(a,b), w) = 1/2 [ g(tor(a,b), w) - g(tor(b,w), a) + g(tor(w,a), b) ]
    const Vec3 tab = to_frame(torsion(a_coord, b_coord));
    Vec3 rhs;
    const Vec3 af = to_frame(a_coord), bf = to_frame(b_coord);
    for (int i = 0; i < 3; ++i) {
        Vec3 w = Vec3::Zero();
        w(i) = 1.0;
        const Vec3 w_coord = from_frame(w);
        const Vec3 tbw = to_frame(torsion(b_coord, w_coord));
        const Vec3 twa = to_frame(torsion(w_coord, a_coord));
        rhs(i) = 0.5 * (tab.dot(G3 * w) - tbw.dot(G3 * af) + twa.dot(G3 * bf));
    }
    return from_frame(G3.inverse() * rhs);
}

Vec3 PointFrame::gamma_apply(const Vec3& a_coord, const Vec3& b_coord) const {
    Vec3 r;
    for (int k = 0; k < 3; ++k) r(k) = a_coord.dot(gamma[k] * b_coord);
    return r;
}

PointFrame make_point_frame(const ContactMetric& metric, const Point3& p) {
    PointFrame f;
    f.p = p;
    f.G = metric.horizontal(p);
    f.detG = f.G.determinant();
    f.sqrtDetG = std::sqrt(f.detG);
    f.G3.setZero();
    f.G3.topLeftCorner<2, 2>() = f.G;
    f.G3(2, 2) = 1.0;
    f.F = frame_matrix(p);
    f.F_inv = frame_matrix_inverse(p);
    f.g = metric.coordinate_metric().tensor(p);
    f.g_inv = f.g.inverse();
    f.sqrt_det_g = std::sqrt(f.g.determinant());
    f.gamma = metric.coordinate_metric().christoffels(p);

    // Endomorphism B(v) = D_v T in frame components, then its antisymmetric
    // and symmetric parts with respect to G3.
    Mat3 B_coord;
    for (int k = 0; k < 3; ++k)
        for (int u = 0; u < 3; ++u) B_coord(k, u) = f.gamma[k](u, 2);
    const Mat3 B = f.F_inv * B_coord * f.F;
    const Mat3 GB = f.G3 * B;
    const Mat3 G3_inv = f.G3.inverse();
    f.J = 0.5 * G3_inv * (GB - GB.transpose());
    f.tau = 0.5 * G3_inv * (GB + GB.transpose());
    return f;
}

Vec3 reeb(const Point3&) { return Vec3(0.0, 0.0, 1.0); }

Mat3 ambient_metric(const ContactMetric& metric, const Point3& p) {
    metric.horizontal(p);  // positive-definiteness check
    return metric.coordinate_metric().tensor(p);
}

Christoffels christoffels(const ContactMetric& metric, const Point3& p) {
    return metric.coordinate_metric().christoffels(p);
}

Vec3 j_operator(const ContactMetric& metric, const Point3& p, const Vec3& v) {
    return make_point_frame(metric, p).j_apply(v);
}

Vec3 tau_operator(const ContactMetric& metric, const Point3& p, const Vec3& v) {
    return make_point_frame(metric, p).tau_apply(v);
}

Vec3 sr_connection(const PointFrame& frame, const VectorFieldJet& V, const VectorFieldJet& W) {
    const Vec3 directional = W.jacobian * V.value;
    return directional + frame.gamma_apply(V.value, W.value) +
           frame.contorsion(V.value, W.value);
}

Vec3 sr_connection(const ContactMetric& metric, const Point3& p, const VectorFieldJet& V,
                   const VectorFieldJet& W) {
    return sr_connection(make_point_frame(metric, p), V, W);
}

}  // namespace csr
