#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "csr/checks.hpp"
#include "csr/graph.hpp"
#include "csr/quadrature.hpp"

using namespace csr;

namespace {

IntrinsicGraph from_expr(const GraphDomain& dom, const char* u) {
    return IntrinsicGraph::sample(dom, ScalarField::parse(u));
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("embedding") {
    const GraphDomain dom(0, 2, 0, 3, 5, 7);
    const IntrinsicGraph g0 = from_expr(dom, "0");
    const Point3 p0 = embed(g0, 2, 3);
    CHECK(p0.x == doctest::Approx(1.0));
    CHECK(p0.y == 0.0);
    CHECK(p0.t == doctest::Approx(1.5));

    const IntrinsicGraph gc = from_expr(dom, "0.5");
    const Point3 pc = embed(gc, 2, 3);
    CHECK(pc.y == doctest::Approx(0.5));
    CHECK(pc.t == doctest::Approx(1.5 - 0.5));

    // u(x,t) = x at (x,t) = (1,2) -> (1, 1, 1).
    const GraphDomain unit(0, 2, 0, 3, 9, 9);
    const IntrinsicGraph gx = from_expr(unit, "x");
    int i = 4;  // x = 1
    int j = 6;  // t = 2.25; pick the node with t = 2.25; use direct formula instead
    const Point3 px = embed(gx, i, j);
    CHECK(px.x == doctest::Approx(1.0));
    CHECK(px.y == doctest::Approx(1.0));
    CHECK(px.t == doctest::Approx(unit.t(j) - 1.0));
}

TEST_CASE("w field") {
    const GraphDomain dom(0, 1, 0, 1, 9, 9);
    for (double v : w_field(from_expr(dom, "0.7"))) CHECK(std::abs(v) <= 1e-13);
    for (double v : w_field(from_expr(dom, "x"))) CHECK(v == doctest::Approx(1.0));
    const IntrinsicGraph gt = from_expr(dom, "t");
    const auto w = w_field(gt);
    for (int i = 0; i < dom.nx; ++i)
        for (int j = 0; j < dom.nt; ++j)
            CHECK(w[dom.idx(i, j)] == doctest::Approx(2.0 * dom.t(j)));
}

TEST_CASE("area: Heisenberg closed forms") {
    const GraphDomain dom(0, 1, 0, 1, 33, 33);
    const ContactMetric h1 = ContactMetric::heisenberg();
    CHECK(area(from_expr(dom, "0"), h1) == doctest::Approx(1.0).epsilon(1e-14));
    // u = x has w = 1 exactly, so the integrand is sqrt(2) everywhere.
    CHECK(area(from_expr(dom, "x"), h1) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("area: Heisenberg reduction to the classical integrand") {
    Rng rng(11);
    const GraphDomain dom(0, 1, 0, 1, 33, 33);
    const ContactMetric h1 = ContactMetric::heisenberg();
    for (int c = 0; c < 5; ++c) {
        const IntrinsicGraph g = IntrinsicGraph::sample(dom, random_graph_function(rng));
        const auto w = w_field(g);
        double oracle = 0.0;
        for (int i = 0; i < dom.nx; ++i)
            for (int j = 0; j < dom.nt; ++j)
                oracle += quad_weight(dom, i, j) *
                          std::sqrt(1.0 + w[dom.idx(i, j)] * w[dom.idx(i, j)]);
        CHECK(std::abs(area(g, h1) - oracle) <= 1e-12);
    }
}

TEST_CASE("area integrand positivity") {
    Rng rng(12);
    const GraphDomain dom(0, 1, 0, 1, 17, 17);
    for (int c = 0; c < 5; ++c) {
        const ContactMetric m = random_perturbed_metric(rng);
        const IntrinsicGraph g = IntrinsicGraph::sample(dom, random_graph_function(rng));
        const HorizontalData h = k1_m_k_fields(g, m, ScalarField::constant(0.0));
        for (int i = 0; i < dom.nx; ++i)
            for (int j = 0; j < dom.nt; ++j) {
                const int k = dom.idx(i, j);
                const Point3 p = embed(g, i, j);
                const double g22 = m.g22()(p);
                CHECK(h.a[k] >= std::sqrt(h.detG[k] / g22) - 1e-12);
                // Schwarz strictness: M^2 < g22.
                CHECK(h.M[k] * h.M[k] < g22);
            }
    }
}

TEST_CASE("volume closed forms") {
    const ContactMetric h1 = ContactMetric::heisenberg();
    const GraphDomain dom(0, 1, 0, 1, 33, 33);
    CHECK(volume(from_expr(dom, "0"), h1) == 0.0);
    CHECK(volume(from_expr(dom, "0.4"), h1) == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(volume(from_expr(dom, "-0.4"), h1) == doctest::Approx(-0.4).epsilon(1e-13));

    // det G = 1 + x^2: volume of u = 1 over the unit square is 4/3.
    const ContactMetric m = ContactMetric::from_strings("1 + x^2", "0", "1");
    const GraphDomain fine(0, 1, 0, 1, 129, 129);
    CHECK(volume(from_expr(fine, "1"), m) == doctest::Approx(4.0 / 3.0).epsilon(2e-5));
}

TEST_CASE("pmc value") {
    const ContactMetric h1 = ContactMetric::heisenberg();
    const GraphDomain dom(0, 1, 0, 1, 33, 33);
    const ScalarField zero = ScalarField::constant(0.0);
    const ScalarField one = ScalarField::constant(1.0);
    const IntrinsicGraph g1 = from_expr(dom, "1");
    CHECK(pmc_value(g1, h1, zero) == doctest::Approx(area(g1, h1)));
    CHECK(pmc_value(g1, h1, one) == doctest::Approx(0.0).epsilon(1e-12));
    // The alternative sign convention adds the volume term.
    CHECK(pmc_value(g1, h1, one, FunctionalSign::AreaPlusVolume) ==
          doctest::Approx(2.0).epsilon(1e-12));

    // Independent quadrature oracle (Gauss-Legendre inner integral).
    Rng rng(13);
    for (int c = 0; c < 3; ++c) {
        const ContactMetric m = random_perturbed_metric(rng);
        const ScalarField f = random_prescribed_f(rng);
        const IntrinsicGraph g = IntrinsicGraph::sample(dom, random_graph_function(rng));
        const CompiledExpr dens(f.expression() * m.det_field().expression());
        static const double gl_x[8] = {-0.9602898564975363, -0.7966664774136267,
                                       -0.5255324099163290, -0.1834346424956498,
                                       0.1834346424956498,  0.5255324099163290,
                                       0.7966664774136267,  0.9602898564975363};
        static const double gl_w[8] = {0.1012285362903763, 0.2223810344533745,
                                       0.3137066458778873, 0.3626837833783620,
                                       0.3626837833783620, 0.3137066458778873,
                                       0.2223810344533745, 0.1012285362903763};
        double vol = 0.0;
        for (int i = 0; i < dom.nx; ++i)
            for (int j = 0; j < dom.nt; ++j) {
                const double x = dom.x(i), t = dom.t(j), u = g.u(i, j);
                double inner = 0.0;
                for (int q = 0; q < 8; ++q) {
                    const double s = 0.5 * u * (1.0 + gl_x[q]);
                    inner += 0.5 * u * gl_w[q] * dens.evaluate(Point3{x, s, t - x * s});
                }
                vol += quad_weight(dom, i, j) * inner;
            }
        const double oracle = area(g, m) - vol;
        CHECK(std::abs(pmc_value(g, m, f) - oracle) <= 1e-10);
    }
}

TEST_CASE("K1, M, K fields") {
    const ContactMetric h1 = ContactMetric::heisenberg();
    const GraphDomain dom(0, 1, 0, 1, 17, 17);
    const ScalarField zero = ScalarField::constant(0.0);
    const ScalarField one = ScalarField::constant(1.0);

    const HorizontalData flat = k1_m_k_fields(from_expr(dom, "0"), h1, zero);
    for (int k = 0; k < dom.size(); ++k) {
        CHECK(flat.K1[k] == 0.0);
        CHECK(flat.M[k] == 0.0);
        CHECK(flat.K[k] == 0.0);
    }

    const HorizontalData slope = k1_m_k_fields(from_expr(dom, "x"), h1, one);
    for (int k = 0; k < dom.size(); ++k) {
        CHECK(slope.M[k] == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(slope.K[k] == doctest::Approx(-1.0));
    }
}

TEST_CASE("first variation: trivial zeros and support validation") {
    const ContactMetric h1 = ContactMetric::heisenberg();
    const GraphDomain dom(0, 1, 0, 1, 17, 17);
    const ScalarField zero = ScalarField::constant(0.0);
    const IntrinsicGraph g = from_expr(dom, "0");

    std::vector<double> v(dom.size(), 0.0);
    CHECK(first_variation(g, h1, zero, v) == 0.0);
    v[dom.idx(8, 8)] = 1.0;
    CHECK(first_variation(g, h1, zero, v) == 0.0);  // K = M = 0

    std::vector<double> bad(dom.size(), 0.0);
    bad[dom.idx(0, 5)] = 1e-3;
    CHECK_THROWS_AS(first_variation(g, h1, zero, bad), std::invalid_argument);
}

TEST_CASE("first variation matches the finite difference of pmc_value") {
    const VariationCheckResult res = run_variation_check(321, 6, 33, 33);
    CHECK(res.max_rel_err <= 1e-6);
    for (const auto& c : res.cases) CHECK(c.rel_err <= 1e-6);
}

TEST_CASE("horizontal normal") {
    const ContactMetric h1 = ContactMetric::heisenberg();
    const GraphDomain dom(0, 1, 0, 1, 17, 17);
    const IntrinsicGraph g0 = from_expr(dom, "0");
    const Vec3 n = horizontal_normal(g0, h1, 8, 8);
    CHECK(n.x() == doctest::Approx(0.0));
    CHECK(n.y() == doctest::Approx(-1.0));
    CHECK(n.z() == doctest::Approx(0.0));

    // g(Y, N~) = -det(G)^{1/2} and |N~_h|^2 = a^2 for any metric and graph.
    Rng rng(14);
    const ContactMetric m = random_perturbed_metric(rng);
    const IntrinsicGraph g = IntrinsicGraph::sample(dom, random_graph_function(rng));
    const HorizontalData h = k1_m_k_fields(g, m, ScalarField::constant(0.0));
    for (int i = 0; i < dom.nx; i += 4)
        for (int j = 0; j < dom.nt; j += 4) {
            const int k = dom.idx(i, j);
            const Point3 p = embed(g, i, j);
            const Mat2 G = m.horizontal(p);
            const Vec3 ab = horizontal_normal(g, m, i, j);
            const Vec2 hcomp(ab.x(), ab.y());
            // g(Y, N~): frame components of Y are (0, 1, 0).
            const double gyn = G.row(1).dot(hcomp);
            CHECK(gyn == doctest::Approx(-std::sqrt(h.detG[k])).epsilon(1e-12));
            CHECK(hcomp.dot(G * hcomp) == doctest::Approx(h.a[k] * h.a[k]).epsilon(1e-12));
        }
}

TEST_CASE("characteristic frame") {
    const ContactMetric h1 = ContactMetric::heisenberg();
    const GraphDomain dom(0, 1, 0, 1, 17, 17);
    const Vec2 z0 = characteristic_frame(from_expr(dom, "0"), h1, 8, 8);
    CHECK(z0.x() == doctest::Approx(1.0));
    CHECK(z0.y() == doctest::Approx(0.0));

    // |Z| = 1 and the root-branch reconstruction matches the direct
    // normalization of Z~ = X + w Y.
    Rng rng(15);
    const ContactMetric m = random_perturbed_metric(rng);
    const IntrinsicGraph g = IntrinsicGraph::sample(dom, random_graph_function(rng));
    for (int i = 0; i < dom.nx; i += 2)
        for (int j = 0; j < dom.nt; j += 2) {
            const Point3 p = embed(g, i, j);
            const Mat2 G = m.horizontal(p);
            const double w = g.ux(i, j) + 2.0 * g.u(i, j) * g.ut(i, j);
            const Vec2 ztilde(1.0, w);
            const double norm = std::sqrt(ztilde.dot(G * ztilde));
            const Vec2 expected = G * (ztilde / norm);  // (<Z,X>, <Z,Y>)
            const Vec2 zc = characteristic_frame(g, m, i, j);
            CHECK(zc.x() == doctest::Approx(expected.x()).epsilon(1e-10));
            CHECK(zc.y() == doctest::Approx(expected.y()).epsilon(1e-10));
            // |Z|^2 via the inverse metric equals 1.
            CHECK(zc.dot(G.inverse() * zc) == doctest::Approx(1.0).epsilon(1e-10));
        }
}

TEST_CASE("grid csv round trip") {
    const GraphDomain dom(0, 1, -1, 1, 9, 11);
    Rng rng(16);
    const IntrinsicGraph g = IntrinsicGraph::sample(dom, random_graph_function(rng));
    const std::string path = "graph_roundtrip_test.csv";
    write_grid_csv(path, g);
    const IntrinsicGraph back = read_grid_csv(path);
    std::remove(path.c_str());
    REQUIRE(back.domain().nx == dom.nx);
    REQUIRE(back.domain().nt == dom.nt);
    CHECK(back.domain().x1 == doctest::Approx(dom.x1));
    for (int k = 0; k < dom.size(); ++k) CHECK(back.u()[k] == g.u()[k]);
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(GraphDomain(0, 1, 0, 1, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(GraphDomain(1, 0, 0, 1, 5, 5), std::invalid_argument);
    std::vector<double> bad(25, 0.0);
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(IntrinsicGraph(GraphDomain(0, 1, 0, 1, 5, 5), bad),
                    std::invalid_argument);
}

}  // TEST_SUITE
