#include "doctest.h"

#include <cmath>

#include "weightlab/expression.hpp"

using namespace weightlab;

TEST_CASE("parser builds canonical trees") {
    CHECK(parse_weight_expr("exp(r)")->to_string() == "exp(r)");
    CHECK(parse_weight_expr("exp(1/(1-r))")->to_string() == "exp(div(1, sub(1, r)))");
    CHECK(parse_weight_expr(" 2 * r + 1 ")->to_string() == "add(mul(2, r), 1)");
    CHECK(parse_weight_expr("r^2^3")->to_string() == "pow(r, pow(2, 3))");
    CHECK(parse_weight_expr("1.5e-3*r")->to_string() == "mul(0.0015, r)");
}

TEST_CASE("parser reports the offset of malformed input") {
    try {
        parse_weight_expr("r^^2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(parse_weight_expr("sin(r)"), ParseError);
    CHECK_THROWS_AS(parse_weight_expr("(r"), ParseError);
    CHECK_THROWS_AS(parse_weight_expr(""), ParseError);
    CHECK_THROWS_AS(parse_weight_expr("r r"), ParseError);
}

TEST_CASE("evaluation near the unit circle stays in log space") {
    auto e = parse_weight_expr("exp(1/(1-r))");
    auto v = e->evaluate(Radius::from_complement(1e-8));
    CHECK(v.sign == 1);
    CHECK(v.log_abs == doctest::Approx(1e8).epsilon(1e-12));
    CHECK(std::isinf(v.value()));

    auto p = parse_weight_expr("1/(1-r)^2")->evaluate(Radius::from_complement(1e-8));
    CHECK(p.log_abs == doctest::Approx(2 * std::log(1e8)).epsilon(1e-12));
}

TEST_CASE("log scalar arithmetic") {
    auto a = LogScalar::from_double(3.0);
    auto b = LogScalar::from_double(-5.0);
    CHECK((a + b).value() == doctest::Approx(-2.0));
    CHECK((a * b).value() == doctest::Approx(-15.0));
    CHECK((a / b).value() == doctest::Approx(-0.6));
    CHECK((a - a).is_zero());
    auto big = LogScalar::from_log(1, 1000.0);
    auto sum = big + big;
    CHECK(sum.log_abs == doctest::Approx(1000.0 + std::log(2.0)));
    CHECK(std::isinf(sum.value()));
}

TEST_CASE("log of a non-positive value is an evaluation error") {
    auto e = parse_weight_expr("log(r-1)");
    CHECK_THROWS_AS(e->evaluate(Radius::from_r(0.5)), EvaluationError);
}
