#ifndef CSR_GEOMETRY_HPP
#define CSR_GEOMETRY_HPP

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

#include "csr/expr.hpp"

// Contact sub-Riemannian kernel in the fixed Darboux chart
//   omega0 = dt + x dy - y dx,  X = d/dx + y d/dt,  Y = d/dy - x d/dt,  T = d/dt.
// The horizontal metric G = (g_ij) is given in the frame {X, Y}; T is extended
// as a unit vector orthogonal to the horizontal distribution.

namespace csr {

// Numerical failure (degenerate metric, lost immersion, non-convergence, ...).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Christoffel symbols: christoffels[k](i, j) = Gamma^k_ij in chart coordinates.
using Christoffels = std::array<Mat3, 3>;

inline Vec3 frame_x(const Point3& p) { return Vec3(1.0, 0.0, p.y); }
inline Vec3 frame_y(const Point3& p) { return Vec3(0.0, 1.0, -p.x); }
inline Vec3 frame_t(const Point3&) { return Vec3(0.0, 0.0, 1.0); }

// Columns are the coordinate components of X, Y, T.
Mat3 frame_matrix(const Point3& p);
Mat3 frame_matrix_inverse(const Point3& p);

inline double omega0(const Point3& p, const Vec3& v) {
    return v.z() + p.x * v.y() - p.y * v.x();
}
// d(omega0) = 2 dx ^ dy.
inline double domega0(const Vec3& a, const Vec3& b) {
    return 2.0 * (a.x() * b.y() - a.y() * b.x());
}

// Ambient metric given directly by its six coordinate components with symbolic
// partials. ContactMetric builds one from the frame data; tests can construct
// flat tensors directly.
struct CoordinateMetric {
    ScalarField xx, xy, xt, yy, yt, tt;

    Mat3 tensor(const Point3& p) const;
    std::array<Mat3, 3> tensor_partials(const Point3& p) const;
    Christoffels christoffels(const Point3& p) const;
};

class ContactMetric {
public:
    ContactMetric(ScalarField g11, ScalarField g12, ScalarField g22);

    static ContactMetric heisenberg();
    static ContactMetric from_strings(const std::string& g11, const std::string& g12,
                                      const std::string& g22);

    const ScalarField& g11() const { return g11_; }
    const ScalarField& g12() const { return g12_; }
    const ScalarField& g22() const { return g22_; }
    const ScalarField& det_field() const { return det_; }
    const CoordinateMetric& coordinate_metric() const { return coord_; }

    // G(p) in the frame {X, Y}; throws NumericError unless positive definite.
    Mat2 horizontal(const Point3& p) const;
    double det(const Point3& p) const;

private:
    ScalarField g11_, g12_, g22_, det_;
    CoordinateMetric coord_;
};

// Everything the pointwise computations need at one chart point.
struct PointFrame {
    Point3 p;
    Mat2 G;              // horizontal metric in {X, Y}
    double detG = 0.0;
    double sqrtDetG = 0.0;
    Mat3 G3;             // frame metric diag(G, 1)
    Mat3 g;              // ambient metric in coordinates
    Mat3 g_inv;
    double sqrt_det_g = 0.0;
    Mat3 F;              // frame matrix (columns X, Y, T)
    Mat3 F_inv;
    Christoffels gamma;
    Mat3 J;              // d/dv -> antisymmetric part of D_v T, frame components
    Mat3 tau;            // symmetric part, frame components

    Vec3 to_frame(const Vec3& v_coord) const { return F_inv * v_coord; }
    Vec3 from_frame(const Vec3& c) const { return F * c; }

    double inner(const Vec3& a_coord, const Vec3& b_coord) const {
        return a_coord.dot(g * b_coord);
    }
    double norm(const Vec3& a_coord) const;

    // Cross product u x v with g(w, u x v) = eta(w, u, v), eta the Riemannian
    // volume form oriented so that eta(X, Y, T) = det(G)^{1/2} > 0.
    Vec3 cross(const Vec3& u, const Vec3& v) const;

    // Horizontal part v - g(v,T) T and the T-component g(v,T).
    Vec3 horizontal_part(const Vec3& v_coord) const;
    double vertical_component(const Vec3& v_coord) const;

    Vec3 j_apply(const Vec3& v_coord) const;    // J(v), coordinates in/out
    Vec3 tau_apply(const Vec3& v_coord) const;  // tau(v)

    // Levi-Civita covariant derivative of T in direction v.
    Vec3 d_dir_T(const Vec3& v_coord) const;

    // Torsion of the sub-Riemannian connection:
    //   tor(a,b) = <a,T> tau(b) - <b,T> tau(a) + 2 <J(a),b> T.
    Vec3 torsion(const Vec3& a_coord, const Vec3& b_coord) const;

    // Contorsion K with nabla_a b = D_a b + K(a, b).
    Vec3 contorsion(const Vec3& a_coord, const Vec3& b_coord) const;

    // Gamma^k_uv a^u b^v.
    Vec3 gamma_apply(const Vec3& a_coord, const Vec3& b_coord) const;
};

PointFrame make_point_frame(const ContactMetric& metric, const Point3& p);

// A vector field sampled with its first coordinate derivatives at a point:
// jacobian(k, u) = d v^k / d x^u.
struct VectorFieldJet {
    Vec3 value = Vec3::Zero();
    Mat3 jacobian = Mat3::Zero();
};

Vec3 reeb(const Point3& p);
Mat3 ambient_metric(const ContactMetric& metric, const Point3& p);
Christoffels christoffels(const ContactMetric& metric, const Point3& p);
Vec3 j_operator(const ContactMetric& metric, const Point3& p, const Vec3& v);
Vec3 tau_operator(const ContactMetric& metric, const Point3& p, const Vec3& v);

// Sub-Riemannian connection nabla_V W at p. Also usable with a precomputed
// frame to avoid rebuilding symbols in inner loops.
Vec3 sr_connection(const ContactMetric& metric, const Point3& p, const VectorFieldJet& V,
                   const VectorFieldJet& W);
Vec3 sr_connection(const PointFrame& frame, const VectorFieldJet& V, const VectorFieldJet& W);

// Frame derivative Y(f) = (df/dy - x df/dt) at p.
inline double frame_y_derivative(const ScalarField& f, const Point3& p) {
    return f.dy(p) - p.x * f.dt(p);
}
inline double frame_x_derivative(const ScalarField& f, const Point3& p) {
    return f.dx(p) + p.y * f.dt(p);
}

}  // namespace csr

#endif
