#include "doctest.h"

#include <cmath>

#include "weightlab/envelope.hpp"

using namespace weightlab;

namespace {

struct Fixture {
    EvaluationGrid grid;
    WeightSpec w;
    LogTransform phi;
    MonomialEnvelope env;
    WeightTable table;
};

Fixture make(Domain d, const char* text) {
    auto grid = default_grid(d);
    auto w = WeightSpec::parse(d, text);
    auto phi = log_transform(w, grid);
    auto env = monomial_coefficients(phi);
    auto table = associated_weight(env, grid);
    return {grid, w, std::move(phi), std::move(env), std::move(table)};
}

}  // namespace

TEST_CASE("conjugate of exp in closed form") {
    auto grid = default_grid(Domain::plane());
    auto phi = log_transform(WeightSpec::parse(Domain::plane(), "exp(r)"), grid);
    auto c1 = legendre_conjugate(phi, 1);
    CHECK(c1.value == doctest::Approx(-1.0).epsilon(1e-9));
    REQUIRE(c1.touch_x);
    CHECK(*c1.touch_x == doctest::Approx(0.0).epsilon(1e-6));
    auto c2 = legendre_conjugate(phi, 2);
    CHECK(c2.value == doctest::Approx(2 * std::log(2.0) - 2).epsilon(1e-9));
    CHECK(*c2.touch_x == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK(legendre_conjugate(phi, 0).value == doctest::Approx(-phi.origin_phi()));
}

TEST_CASE("exp envelope coefficients are (e/n)^n with touch points at r = n") {
    auto f = make(Domain::plane(), "exp(r)");
    CHECK(f.env.intercept(0).value() == 0.0);
    const double x_end = f.grid.x(f.grid.size() - 1);
    for (const auto& line : f.env.lines()) {
        // slopes beyond r_max touch at the clamped right end
        if (line.slope == 0 || std::log(static_cast<double>(line.slope)) >= x_end) continue;
        double n = static_cast<double>(line.slope);
        CHECK(line.intercept == doctest::Approx(n * (1 - std::log(n))).epsilon(1e-8));
        REQUIRE(line.touch_x);
        CHECK(*line.touch_x == doctest::Approx(std::log(n)).epsilon(1e-6));
    }
    CHECK_FALSE(f.env.truncated());
}

TEST_CASE("disk coefficients of 1/(1-r)") {
    auto f = make(Domain::disk(), "1/(1-r)");
    for (std::int64_t n : {1, 2, 5, 10, 100}) {
        auto a = f.env.intercept(n);
        if (!a) continue;
        double r = static_cast<double>(n) / (n + 1);
        double exact = -std::log1p(-r) - n * std::log(r);  // inf_r 1/((1-r) r^n)
        CHECK(*a == doctest::Approx(exact).epsilon(1e-8));
    }
}

TEST_CASE("associated weight values for exp") {
    auto f = make(Domain::plane(), "exp(r)");
    CHECK(std::exp(f.env.log_value(Radius::from_r(1.0))) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    CHECK(std::exp(f.env.log_value(Radius::from_r(0.5))) == doctest::Approx(std::exp(1.0) / 2).epsilon(1e-9));
    CHECK(f.env.log_value(Radius::from_r(0.0)) == doctest::Approx(0.0));
    CHECK(envelope_right_derivative(f.env, Radius::from_r(1.0)) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    CHECK(envelope_right_derivative(f.env, Radius::from_r(0.1)) == 0.0);
    CHECK_THROWS_AS(envelope_right_derivative(f.env, Radius::from_r(0.0)), std::domain_error);
    for (std::size_t i = f.grid.size() - 50; i < f.grid.size(); ++i) {
        double ratio = std::exp(f.table.log_right_derivatives()[i] - f.table.log_value(i));
        CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("envelope invariants over the example weights") {
    const std::pair<Domain, const char*> cases[] = {
        {Domain::plane(), "exp(r)"},       {Domain::plane(), "exp(r^2)"},   {Domain::plane(), "exp(r)*(r+1)"},
        {Domain::disk(), "1/(1-r)"},       {Domain::disk(), "1/(1-r)^2"},   {Domain::disk(), "exp(1/(1-r))"},
    };
    for (const auto& [d, text] : cases) {
        CAPTURE(text);
        auto f = make(d, text);
        // minorant
        for (std::size_t i = 0; i < f.grid.size(); ++i)
            CHECK(f.table.log_value(i) <= f.w.log_value(f.grid.point(i)) + 1e-9 * std::max(1.0, std::fabs(f.table.log_value(i))));
        // tightness at recorded touch points
        for (const auto& line : f.env.lines()) {
            if (!line.touch_x) continue;
            double phi = f.phi.phi_at(*line.touch_x);
            double s = f.grid.radius_at(*line.touch_x).log_r;
            CHECK(std::fabs(line.at(s) - phi) <= 1e-6 * std::max(1.0, std::fabs(phi)));
        }
        // monotone argmax and non-decreasing, log-convex values
        for (std::size_t i = 1; i < f.grid.size(); ++i) {
            CHECK(f.table.active_slope(i) >= f.table.active_slope(i - 1));
            CHECK(f.table.log_value(i) >= f.table.log_value(i - 1));
        }
        CHECK(f.table.origin_log_value() == doctest::Approx(f.w.log_value(Radius::from_r(0.0))));
    }
}

TEST_CASE("sandwich constants") {
    auto e = make(Domain::plane(), "exp(r)");
    auto s = sandwich_constants(e.w, e.table);
    CHECK(s.constant <= std::exp(1.0) * (1 + 1e-6));
    CHECK(s.plain_ratio <= std::exp(1.0));
    // beyond r = e - 1 the plane ratio is already below 1
    for (std::size_t i = 0; i < e.grid.size(); ++i) {
        if (e.grid.r(i) < std::exp(1.0) - 1) continue;
        double ratio = std::exp(e.w.log_value(e.grid.point(i)) - e.table.log_value(i)) / (1 + e.grid.r(i));
        CHECK(ratio <= 1.0 + 1e-9);
    }
    auto d = make(Domain::disk(), "1/(1-r)");
    auto sd = sandwich_constants(d.w, d.table);
    CHECK(std::isfinite(sd.constant));
    CHECK(sd.constant < 2.0);
}

TEST_CASE("integrated envelope matches closed forms") {
    auto f = make(Domain::plane(), "exp(r)");
    // below the first breakpoint the envelope is the constant 1
    CHECK(std::exp(log_integrated_envelope(f.env, Radius::from_r(0.2))) == doctest::Approx(0.2));
    // int_0^r w_hat <= e^r - 1 and >= (e^r - 1)/e for large r
    for (double r : {5.0, 30.0, 500.0}) {
        double li = log_integrated_envelope(f.env, Radius::from_r(r));
        double lw = r + std::log(-std::expm1(-r));
        CHECK(li <= lw + 1e-12);
        CHECK(li >= lw - 1.0);
    }
    auto piecewise = log_integrated_envelope(f.env, {Radius::from_r(1.0), Radius::from_r(2.0)});
    REQUIRE(piecewise.size() == 2);
    // w_hat = 1 on [0, 1/e], e r on [1/e, 1] (slope 1 until the 1-2 breakpoint at r = 4/e)
    double exact1 = 1 / std::exp(1.0) + std::exp(1.0) * (1 - std::exp(-2.0)) / 2;
    CHECK(std::exp(piecewise[0]) == doctest::Approx(exact1).epsilon(1e-9));
}

TEST_CASE("envelope is deterministic") {
    auto a = make(Domain::disk(), "exp(1/(1-r))");
    auto b = make(Domain::disk(), "exp(1/(1-r))");
    REQUIRE(a.env.lines().size() == b.env.lines().size());
    for (std::size_t i = 0; i < a.env.lines().size(); ++i) {
        CHECK(a.env.lines()[i].slope == b.env.lines()[i].slope);
        CHECK(a.env.lines()[i].intercept == b.env.lines()[i].intercept);
    }
    CHECK(a.table.log_values() == b.table.log_values());
}
