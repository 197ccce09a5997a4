#include <doctest.h>

#include "crit/errors.hpp"
#include "crit/expression.hpp"

using crit::Error;
using crit::ErrorCode;
using crit::Expression;

TEST_CASE("grammar exercise: 1/(1+t)") {
    auto e = Expression::parse("1/(1+t)");
    CHECK(e.str() == "(1 / (1 + t))");
    CHECK(e.eval(0.0) == doctest::Approx(1.0));
    CHECK(e.eval(1.0) == doctest::Approx(0.5));
}

TEST_CASE("evaluator check: exp(-0.1*t) + 0.5 at t = 0") {
    auto e = Expression::parse("exp(-0.1*t) + 0.5");
    CHECK(e.eval(0.0) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("the power operator is ^, not **") {
    CHECK_THROWS_AS(Expression::parse("2 ** t"), Error);
    try {
        Expression::parse("2 ** t");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
    }
}

TEST_CASE("precedence and unary minus") {
    CHECK(Expression::parse("1+2*3^2").eval(0.0) == doctest::Approx(19.0));
    CHECK(Expression::parse("-2^2").eval(0.0) == doctest::Approx(4.0)); // (-2)^2 under this grammar
    CHECK(Expression::parse("2*-3").eval(0.0) == doctest::Approx(-6.0));
    CHECK(Expression::parse("min(t, 3) + max(t, 7)").eval(5.0) == doctest::Approx(10.0));
    CHECK(Expression::parse("1e3 + 2.5e-1").eval(0.0) == doctest::Approx(1000.25));
}

TEST_CASE("n is accepted as the variable name") {
    auto e = Expression::parse("0.5*(n+1)/n");
    CHECK(e.eval(4.0) == doctest::Approx(0.625));
}

TEST_CASE("parse -> print -> parse is a fixed point") {
    const char* samples[] = {
        "1/(1+t)",
        "exp(-0.1*t) + 0.5",
        "min(1, max(t, 0.5)) * sqrt(t + 2)",
        "-(t^2) + sin(t)*cos(t) - 3/(t+1)",
        "2^t / (1 + log(t + 1))",
    };
    for (const char* s : samples) {
        auto e1 = Expression::parse(s);
        auto printed = e1.str();
        auto e2 = Expression::parse(printed);
        CHECK(e2.str() == printed);
        CHECK(e1.structurally_equal(e2));
    }
}

TEST_CASE("evaluation diagnostics are total") {
    CHECK_THROWS_AS(Expression::parse("1/t").eval(0.0), Error);
    CHECK_THROWS_AS(Expression::parse("log(t)").eval(0.0), Error);
    CHECK_THROWS_AS(Expression::parse("sqrt(0-t)").eval(4.0), Error);
    CHECK_THROWS_AS(Expression::parse("exp(t)").eval(1e9), Error);
    try {
        Expression::parse("1/t").eval(0.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EvaluationError);
    }
}

TEST_CASE("syntax errors carry byte offsets; unknown identifiers are separate") {
    try {
        Expression::parse("1 + (2 *");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SyntaxError);
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
    try {
        Expression::parse("foo(t)");
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownIdentifier);
    }
    CHECK_THROWS_AS(Expression::parse("exp(t, 1)"), Error);
    CHECK_THROWS_AS(Expression::parse("min(t)"), Error);
    CHECK_THROWS_AS(Expression::parse(""), Error);
    CHECK_THROWS_AS(Expression::parse("1 + 2) "), Error);
}
