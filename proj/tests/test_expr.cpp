#include <doctest.h>

#include <cmath>

#include "subgeo/expr.hpp"

using namespace subgeo;

TEST_CASE("parse shapes") {
    const auto a = parse("1/(x2^2)", 2);
    REQUIRE(a->kind == ExprKind::Divide);
    CHECK(a->children[0]->kind == ExprKind::Number);
    CHECK(a->children[1]->kind == ExprKind::Power);
    CHECK(a->children[1]->index == 2);

    const auto b = parse("-log(x3)", 3);
    REQUIRE(b->kind == ExprKind::Negate);
    CHECK(b->children[0]->kind == ExprKind::Call);
    CHECK(b->children[0]->function == Function::Log);
}

TEST_CASE("precedence and associativity") {
    CHECK(eval_value(parse("2-3-4", 1), Point::Zero(1)) == -5.0);
    CHECK(eval_value(parse("8/4/2", 1), Point::Zero(1)) == 1.0);
    CHECK(eval_value(parse("1+2*3", 1), Point::Zero(1)) == 7.0);
    CHECK(eval_value(parse("-2^2", 1), Point::Zero(1)) == -4.0);
    CHECK(eval_value(parse("2*x1^-1", 1), Point::Constant(1, 4.0)) == 0.5);
}

TEST_CASE("syntax errors carry offsets") {
    try {
        parse("x1+*x2", 2);
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 3);
    }
    CHECK_THROWS_AS(parse("", 1), SyntaxError);
    CHECK_THROWS_AS(parse("x1^1.5", 1), SyntaxError);
    CHECK_THROWS_AS(parse("(x1", 1), SyntaxError);
    CHECK_THROWS_AS(parse("foo(x1)", 1), UnknownIdentifier);
    CHECK_THROWS_AS(parse("x3", 2), VariableOutOfRange);
    CHECK_THROWS_AS(parse("x0", 2), VariableOutOfRange);
    CHECK_THROWS_AS(parse("u1", 2), VariableOutOfRange);
    CHECK_NOTHROW(parse("u2*x1", ChartVariables{2, 2}));
}

TEST_CASE("jet evaluation") {
    Point p(2);
    p << 0.0, 1.0;
    const auto a = eval_jet(parse("1/(x2^2)", 2), p, 1);
    CHECK(a.value() == doctest::Approx(1.0));
    CHECK(a.d(0) == doctest::Approx(0.0));
    CHECK(a.d(1) == doctest::Approx(-2.0));

    const auto b = eval_jet(parse("exp(x1)*x2", 2), p, 1);
    CHECK(b.value() == doctest::Approx(1.0));
    CHECK(b.d(0) == doctest::Approx(1.0));
    CHECK(b.d(1) == doctest::Approx(1.0));

    Point q(2);
    q << 0.0, std::exp(1.0);
    const auto c = eval_jet(parse("-log(x2)", 2), q, 2);
    CHECK(c.value() == doctest::Approx(-1.0));
    CHECK(c.d(1) == doctest::Approx(-std::exp(-1.0)));
    CHECK(c.d(1, 1) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("domain errors carry the point") {
    Point p(1);
    p << -2.0;
    try {
        eval_jet(parse("log(x1)", 1), p, 1);
        FAIL("expected a domain error");
    } catch (const EvalDomain& e) {
        REQUIRE(e.point().size() == 1);
        CHECK(e.point()[0] == -2.0);
    }
    CHECK_THROWS_AS(eval_value(parse("1/(x1+2)", 1), p), EvalDomain);
}

TEST_CASE("print then parse round-trips") {
    const char* cases[] = {
        "1/(x2^2)", "-log(x3)", "exp(x1)*x2 - 3.25e-3", "-(x1+x2)^-3", "sqrt(x1*x1 + 1)/tanh(x2)",
        "sin(cos(x1))-0.1/3", "2/x3/x1", "x1-x2-x3", "-(-x1)", "u1*x2+u2^2",
    };
    const ChartVariables vars{3, 2};
    for (const char* text : cases) {
        const auto e = parse(text, vars);
        const auto again = parse(print(e, vars), vars);
        CHECK_MESSAGE(structurally_equal(e, again), text);
    }
}
