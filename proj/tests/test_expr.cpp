#include <doctest.h>

#include <cmath>
#include <random>

#include "csr/checks.hpp"
#include "csr/expr.hpp"

using namespace csr;

namespace {

double fd_partial(const Expression& e, Var v, const Point3& p, double h) {
    Point3 lo = p, hi = p;
    double* plo = v == Var::X ? &lo.x : v == Var::Y ? &lo.y : &lo.t;
    double* phi = v == Var::X ? &hi.x : v == Var::Y ? &hi.y : &hi.t;
    *plo -= h;
    *phi += h;
    return (e.evaluate(hi) - e.evaluate(lo)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("parse basics") {
    CHECK(parse_expression("1").is_constant());
    CHECK(parse_expression("1").constant_value() == 1.0);
    CHECK(parse_expression("x*y").evaluate(Point3{2, 3, 0}) == doctest::Approx(6.0));
    CHECK(parse_expression("2*(x + t)^2").evaluate(Point3{1, 0, 2}) ==
          doctest::Approx(18.0));
    CHECK(parse_expression("1e-3").constant_value() == doctest::Approx(1e-3));
    CHECK(parse_expression("pi").constant_value() == doctest::Approx(M_PI));
}

TEST_CASE("positioned syntax errors") {
    try {
        parse_expression("x +");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset == 3);
    }
    try {
        parse_expression("x + foo");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse_expression(""), ParseError);
    CHECK_THROWS_AS(parse_expression("(x"), ParseError);
    CHECK_THROWS_AS(parse_expression("sin x"), ParseError);
}

TEST_CASE("constant-only exponents") {
    CHECK_THROWS_AS(parse_expression("x^y"), ParseError);
    CHECK_THROWS_AS(parse_expression("x^(1 + t)"), ParseError);
    CHECK(parse_expression("x^(1 + 1)").evaluate(Point3{3, 0, 0}) == doctest::Approx(9.0));
    CHECK(parse_expression("x^-2").evaluate(Point3{2, 0, 0}) == doctest::Approx(0.25));
    CHECK(parse_expression("x^2.5").evaluate(Point3{4, 0, 0}) == doctest::Approx(32.0));
}

TEST_CASE("evaluation domain errors") {
    CHECK(parse_expression("sin(x)").evaluate(Point3{0, 1, 1}) == 0.0);
    CHECK(parse_expression("x^2").evaluate(Point3{3, 0, 0}) == 9.0);
    CHECK_THROWS_AS(parse_expression("1/x").evaluate(Point3{0, 0, 0}), DomainError);
    CHECK_THROWS_AS(parse_expression("log(x)").evaluate(Point3{-1, 0, 0}), DomainError);
    CHECK_THROWS_AS(parse_expression("log(x)").evaluate(Point3{0, 0, 0}), DomainError);
    CHECK_THROWS_AS(parse_expression("sqrt(x)").evaluate(Point3{-2, 0, 0}), DomainError);
    CHECK_THROWS_AS(parse_expression("x^0.5").evaluate(Point3{-2, 0, 0}), DomainError);
    CHECK_THROWS_AS(parse_expression("x^-1").evaluate(Point3{0, 0, 0}), DomainError);
}

TEST_CASE("derivatives: fixed examples") {
    const Expression x2 = parse_expression("x^2");
    CHECK(x2.derivative(Var::X).evaluate(Point3{3, 0, 0}) == doctest::Approx(6.0));

    const Expression xy = parse_expression("x*y");
    const Expression d = xy.derivative(Var::T);
    CHECK(d.is_constant());
    CHECK(d.constant_value() == 0.0);

    // d/dx sin(x t) at (1, ., 2) -> 2 cos(2); frozen from the FD oracle.
    const Expression s = parse_expression("sin(x*t)");
    const Point3 p{1, 0, 2};
    const double sym = s.derivative(Var::X).evaluate(p);
    const double fd = fd_partial(s, Var::X, p, 1e-6);
    CHECK(sym == doctest::Approx(fd).epsilon(1e-8));
    CHECK(sym == doctest::Approx(2.0 * std::cos(2.0)).epsilon(1e-14));
}

TEST_CASE("derivatives agree with finite differences on random polynomials") {
    Rng rng(1234);
    std::uniform_real_distribution<double> pt(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const Expression e = random_polynomial(rng, 4, 2.0);
        const Expression dx = e.derivative(Var::X);
        const Expression dy = e.derivative(Var::Y);
        const Expression dt = e.derivative(Var::T);
        for (int q = 0; q < 10; ++q) {
            const Point3 p{pt(rng), pt(rng), pt(rng)};
            const Expression* ds[3] = {&dx, &dy, &dt};
            const Var vars[3] = {Var::X, Var::Y, Var::T};
            for (int v = 0; v < 3; ++v) {
                const double sym = ds[v]->evaluate(p);
                const double fd = fd_partial(e, vars[v], p, 1e-5);
                CHECK(std::abs(sym - fd) / (1.0 + std::abs(sym)) <= 1e-6);
            }
        }
    }
}

TEST_CASE("derivatives of the transcendental kernel") {
    Rng rng(77);
    const char* exprs[] = {"sin(x*t) + cos(y)", "exp(x*y/4)", "log(2 + x)",
                           "sqrt(1 + x^2 + t^2)", "(x + y)/(2 + t)", "sin(x)^3"};
    std::uniform_real_distribution<double> pt(-0.9, 0.9);
    for (const char* s : exprs) {
        const Expression e = parse_expression(s);
        for (int q = 0; q < 5; ++q) {
            const Point3 p{pt(rng), pt(rng), pt(rng)};
            for (Var v : {Var::X, Var::Y, Var::T}) {
                const double sym = e.derivative(v).evaluate(p);
                const double fd = fd_partial(e, v, p, 1e-6);
                CHECK(sym == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("print / parse round trip") {
    const char* corpus[] = {
        "1", "x", "x + y*t", "x - (y - t)", "-x^2", "(x + y)/(t - 2)",
        "sin(cos(x)) + exp(y)", "sqrt(1 + x^2)", "x/y/t", "2*x^3 - 0.5*t",
        "-(x + y)", "x - -y", "log(2 + x^2)^2",
    };
    for (const char* s : corpus) {
        const Expression once = parse_expression(s);
        const Expression twice = parse_expression(once.print());
        CHECK(structurally_equal(once, twice));
        CHECK(once.print() == twice.print());
    }
    Rng rng(99);
    for (int k = 0; k < 50; ++k) {
        const Expression e = random_polynomial(rng, 3, 1.5) + random_sin_term(rng, 0.7);
        const Expression once = parse_expression(e.print());
        const Expression twice = parse_expression(once.print());
        CHECK(structurally_equal(once, twice));
        CHECK(once.print() == twice.print());
        // The printed form evaluates to the same values.
        CHECK(once.evaluate(Point3{0.3, -0.4, 0.7}) ==
              doctest::Approx(e.evaluate(Point3{0.3, -0.4, 0.7})).epsilon(1e-15));
    }
}

TEST_CASE("compiled evaluation matches the tree walk") {
    Rng rng(5);
    std::uniform_real_distribution<double> pt(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const Expression e = random_polynomial(rng, 3, 1.0) + random_sin_term(rng, 0.5);
        const CompiledExpr c(e);
        for (int q = 0; q < 5; ++q) {
            const Point3 p{pt(rng), pt(rng), pt(rng)};
            CHECK(c.evaluate(p) == doctest::Approx(e.evaluate(p)).epsilon(1e-15));
        }
    }
}

TEST_CASE("scalar field gradients") {
    const ScalarField f = ScalarField::parse("x^2*t + sin(y)");
    const Point3 p{0.5, 0.25, -0.75};
    CHECK(f(p) == doctest::Approx(0.25 * -0.75 + std::sin(0.25)));
    CHECK(f.dx(p) == doctest::Approx(2 * 0.5 * -0.75));
    CHECK(f.dy(p) == doctest::Approx(std::cos(0.25)));
    CHECK(f.dt(p) == doctest::Approx(0.25));
}

}  // TEST_SUITE
