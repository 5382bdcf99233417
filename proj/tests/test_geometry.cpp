#include <doctest.h>

#include <cmath>

#include "csr/checks.hpp"
#include "csr/geometry.hpp"

using namespace csr;

namespace {

Point3 random_point(Rng& rng, double box = 0.8) {
    std::uniform_real_distribution<double> u(-box, box);
    return Point3{u(rng), u(rng), u(rng)};
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("reeb field and the contact form") {
    Rng rng(1);
    for (int k = 0; k < 10; ++k) {
        const Point3 p = random_point(rng);
        const Vec3 T = reeb(p);
        CHECK(T == Vec3(0, 0, 1));
        CHECK(omega0(p, T) == doctest::Approx(1.0));
        CHECK(domega0(T, frame_x(p)) == doctest::Approx(0.0));
        CHECK(domega0(T, frame_y(p)) == doctest::Approx(0.0));
        // The frame spans the kernel of omega0.
        CHECK(omega0(p, frame_x(p)) == doctest::Approx(0.0));
        CHECK(omega0(p, frame_y(p)) == doctest::Approx(0.0));
    }
}

TEST_CASE("ambient metric") {
    const ContactMetric h1 = ContactMetric::heisenberg();
    CHECK(ambient_metric(h1, Point3{0, 0, 0}).isApprox(Mat3::Identity(), 1e-15));

    const ContactMetric m =
        ContactMetric::from_strings("1 + 0.1*x^2", "0.3", "1 + 0.1*y^2");
    Rng rng(2);
    for (int k = 0; k < 20; ++k) {
        const Point3 p = random_point(rng);
        const Mat3 g = ambient_metric(m, p);
        const Vec3 T = frame_t(p);
        CHECK(T.dot(g * T) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(frame_x(p).dot(g * T) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(frame_y(p).dot(g * T) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(frame_x(p).dot(g * frame_y(p)) == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(frame_x(p).dot(g * frame_x(p)) ==
              doctest::Approx(1 + 0.1 * p.x * p.x).epsilon(1e-12));
    }

    const ContactMetric bad = ContactMetric::from_strings("x", "0", "1");
    CHECK_THROWS_AS(ambient_metric(bad, Point3{-1, 0, 0}), NumericError);
}

TEST_CASE("christoffels: constant coordinate tensor is flat") {
    CoordinateMetric cm;
    cm.xx = ScalarField::parse("2");
    cm.xy = ScalarField::parse("0.3");
    cm.xt = ScalarField::parse("0.1");
    cm.yy = ScalarField::parse("1.5");
    cm.yt = ScalarField::parse("-0.2");
    cm.tt = ScalarField::parse("1");
    const Christoffels gamma = cm.christoffels(Point3{0.3, -0.2, 0.7});
    for (int k = 0; k < 3; ++k) CHECK(gamma[k].norm() == doctest::Approx(0.0));
}

TEST_CASE("christoffels: D_T T vanishes and the FD oracle agrees") {
    Rng rng(3);
    const ContactMetric h1 = ContactMetric::heisenberg();
    const ContactMetric pm = random_polynomial_metric(rng);
    for (const ContactMetric* m : {&h1, &pm}) {
        for (int k = 0; k < 10; ++k) {
            const Point3 p = random_point(rng);
            const PointFrame fr = make_point_frame(*m, p);
            CHECK(fr.norm(fr.gamma_apply(Vec3(0, 0, 1), Vec3(0, 0, 1))) <= 1e-8);
        }
    }

    // Finite differences of the coordinate tensor, step 1e-5.
    const Point3 p = random_point(rng);
    const Christoffels gamma = christoffels(h1, p);
    const CoordinateMetric& cm = h1.coordinate_metric();
    const double h = 1e-5;
    std::array<Mat3, 3> dg;
    for (int mu = 0; mu < 3; ++mu) {
        Point3 hi = p, lo = p;
        (mu == 0 ? hi.x : mu == 1 ? hi.y : hi.t) += h;
        (mu == 0 ? lo.x : mu == 1 ? lo.y : lo.t) -= h;
        dg[mu] = (cm.tensor(hi) - cm.tensor(lo)) / (2.0 * h);
    }
    const Mat3 ginv = cm.tensor(p).inverse();
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int l = 0; l < 3; ++l)
                    s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                CHECK(gamma[k](i, j) == doctest::Approx(0.5 * s).epsilon(1e-6));
            }
}

TEST_CASE("J and tau in the Heisenberg group") {
    const ContactMetric h1 = ContactMetric::heisenberg();
    Rng rng(4);
    for (int k = 0; k < 10; ++k) {
        const Point3 p = random_point(rng);
        const PointFrame fr = make_point_frame(h1, p);
        CHECK((fr.j_apply(frame_x(p)) - frame_y(p)).norm() <= 1e-10);
        CHECK((fr.j_apply(frame_y(p)) + frame_x(p)).norm() <= 1e-10);
        CHECK(fr.norm(fr.tau_apply(frame_x(p))) <= 1e-10);
        CHECK(fr.norm(fr.tau_apply(frame_y(p))) <= 1e-10);
        CHECK(fr.norm(fr.j_apply(frame_t(p))) <= 1e-10);
        CHECK(fr.norm(fr.tau_apply(frame_t(p))) <= 1e-10);
    }
}

TEST_CASE("J antisymmetric, tau symmetric, J nonzero on nonzero horizontal vectors") {
    Rng rng(5);
    const ContactMetric m = random_polynomial_metric(rng);
    for (int k = 0; k < 20; ++k) {
        const Point3 p = random_point(rng);
        const PointFrame fr = make_point_frame(m, p);
        std::uniform_real_distribution<double> c(-1.0, 1.0);
        const Vec3 v = c(rng) * frame_x(p) + c(rng) * frame_y(p);
        const Vec3 w = c(rng) * frame_x(p) + c(rng) * frame_y(p);
        CHECK(fr.inner(fr.j_apply(v), w) ==
              doctest::Approx(-fr.inner(fr.j_apply(w), v)).epsilon(1e-10));
        CHECK(fr.inner(fr.tau_apply(v), w) ==
              doctest::Approx(fr.inner(fr.tau_apply(w), v)).epsilon(1e-10));
        if (fr.norm(v) > 1e-3) CHECK(fr.norm(fr.j_apply(v)) > 0.0);
    }
}

TEST_CASE("bracket identity 2<J(v),w> = -<[v,w],T>") {
    const GeometryCheckResult res = run_geometry_check(42, 3, 25);
    CHECK(res.max_bracket_identity <= 1e-8);
    CHECK(res.max_J_of_T <= 1e-8);
    CHECK(res.max_tau_of_T <= 1e-8);
    CHECK(res.min_orientation > 0.0);
}

TEST_CASE("sub-Riemannian connection: T is parallel") {
    Rng rng(6);
    const ContactMetric m = random_polynomial_metric(rng);
    VectorFieldJet Tjet;
    Tjet.value = Vec3(0, 0, 1);
    for (int k = 0; k < 10; ++k) {
        const Point3 p = random_point(rng);
        std::uniform_real_distribution<double> c(-1.0, 1.0);
        VectorFieldJet V;
        V.value = Vec3(c(rng), c(rng), c(rng));
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) V.jacobian(a, b) = c(rng);
        const PointFrame fr = make_point_frame(m, p);
        CHECK(fr.norm(sr_connection(fr, V, Tjet)) <= 1e-8);
    }
}

TEST_CASE("torsion of the connection has the prescribed vertical part") {
    Rng rng(7);
    const ContactMetric m = random_polynomial_metric(rng);
    for (int k = 0; k < 10; ++k) {
        const Point3 p = random_point(rng);
        const PointFrame fr = make_point_frame(m, p);
        // Frame fields X, Y as jets: X = (1, 0, y), Y = (0, 1, -x).
        VectorFieldJet X, Y;
        X.value = frame_x(p);
        X.jacobian(2, 1) = 1.0;
        Y.value = frame_y(p);
        Y.jacobian(2, 0) = -1.0;
        const Vec3 bracket = Y.jacobian * X.value - X.jacobian * Y.value;
        const Vec3 tor = sr_connection(fr, X, Y) - sr_connection(fr, Y, X) - bracket;
        const double vert = fr.vertical_component(tor);
        CHECK(vert ==
              doctest::Approx(2.0 * fr.inner(fr.j_apply(X.value), Y.value)).epsilon(1e-10));
        // And tor matches the defining expression (tau terms vanish for
        // horizontal arguments of zero vertical component).
        const Vec3 expected = fr.torsion(X.value, Y.value);
        CHECK((tor - expected).norm() <= 1e-8);
    }
}

TEST_CASE("metric compatibility along random curves") {
    const GeometryCheckResult res = run_geometry_check(43, 3, 5);
    CHECK(res.max_compatibility <= 1e-6);
    CHECK(res.max_nabla_T <= 1e-8);
    CHECK(res.max_D_T_T <= 1e-8);
}

}  // TEST_SUITE
