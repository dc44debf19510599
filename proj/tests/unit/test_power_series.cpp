#include "doctest.h"

#include <cmath>
#include <limits>

#include "weightlab/power_series.hpp"

using namespace weightlab;

namespace {

const CircleQuadrature kQ{1024};
const Exponent kInf = Exponent::infinity();

PowerSeries poly(std::vector<std::complex<double>> c) { return PowerSeries::from_coefficients(c); }

}  // namespace

TEST_CASE("integral means of simple series") {
    CHECK(mp_mean(poly({0, 0, 3}), Exponent{2.0}, 0.5, kQ) == doctest::Approx(0.75));
    CHECK(mp_mean(poly({1, 1}), Exponent{2.0}, 0.5, kQ) == doctest::Approx(std::sqrt(1.25)));
    CHECK(mp_mean(poly({1, 1}), kInf, 0.5, kQ) == doctest::Approx(1.5));
    CHECK(std::exp(log_mp_mean_quadrature(poly({1, 1}), Exponent{2.0}, 0.5, kQ)) == doctest::Approx(std::sqrt(1.25)));
    CHECK(std::exp(log_mp_mean_quadrature(poly({1, 1}), kInf, 0.5, kQ)) == doctest::Approx(1.5));
    // |1 - z| on r = 0.5 with complex coefficients: max at theta = pi
    CHECK(mp_mean(poly({1, {0, 1}}), kInf, 0.5, kQ) == doctest::Approx(1.5).epsilon(1e-9));
    // p = 1 of 1 + z at r = 1: (1/2pi) int |1 + e^{it}| = 4/pi
    CHECK(mp_mean(poly({1, 1}), Exponent{1.0}, 1.0, CircleQuadrature{1 << 16}) == doctest::Approx(4 / M_PI).epsilon(1e-6));
    CHECK(mp_mean(poly({2, 5}), Exponent{3.0}, 0.0, kQ) == doctest::Approx(2.0));
    CHECK(mp_mean(PowerSeries{}, Exponent{2.0}, 1.0, kQ) == 0.0);
}

TEST_CASE("integral means reject bad inputs") {
    CHECK_THROWS_AS(log_mp_mean(poly({1, 1}), Exponent{2.0}, 1.0, kQ, Domain::disk()), std::invalid_argument);
    CHECK_THROWS_AS(log_mp_mean(poly({1, 1}), Exponent{2.0}, -0.5, kQ), std::invalid_argument);
    std::vector<std::complex<double>> c(300, 1.0);
    CHECK_THROWS_AS(log_mp_mean(poly(c), Exponent{1.0}, 0.5, kQ), std::invalid_argument);
    CHECK_THROWS_AS(log_mp_mean(poly({1, 1}), Exponent{1.0}, 0.5, CircleQuadrature{1000}), std::invalid_argument);
    CHECK(CircleQuadrature::for_series(poly(c)).m == 2048);
}

TEST_CASE("monomials have constant modulus for every p") {
    auto f = PowerSeries::monomial(7, {0.0, -2.5});
    for (double p : {0.3, 1.0, 2.0, 5.0, std::numeric_limits<double>::infinity()})
        CHECK(mp_mean(f, Exponent{p}, 1.7, kQ) == doctest::Approx(2.5 * std::pow(1.7, 7)));
}

TEST_CASE("coefficient operators") {
    CHECK(apply_D(poly({0, 0, 1})).dense() == std::vector<std::complex<double>>{0, 2});
    CHECK(apply_D(poly({1})).is_zero());
    auto d = apply_D(poly({1, 1, 0.5})).dense();
    REQUIRE(d.size() == 2);
    CHECK(d[0].real() == doctest::Approx(1.0));
    CHECK(d[1].real() == doctest::Approx(1.0));
    CHECK(apply_J(poly({1})).dense() == std::vector<std::complex<double>>{0, 1});
    auto j = apply_J(poly({0, 2})).dense();
    CHECK(j[2].real() == doctest::Approx(1.0));
    for (const auto& f : random_polynomials(20, 16, 3)) {
        auto back = apply_D(apply_J(f));
        REQUIRE(back.terms().size() == f.terms().size());
        for (std::size_t k = 0; k < f.terms().size(); ++k) {
            CHECK(back.terms()[k].degree == f.terms()[k].degree);
            CHECK(back.terms()[k].log_abs == doctest::Approx(f.terms()[k].log_abs));
            CHECK(back.terms()[k].arg == f.terms()[k].arg);
        }
    }
}

TEST_CASE("tail series") {
    std::vector<std::complex<double>> c;
    double fact = 1.0;
    for (int k = 0; k <= 30; ++k) {
        if (k) fact *= k;
        c.push_back(1.0 / fact);
    }
    auto g = poly(c);
    auto g2 = tail_series(g, 2);
    for (double r : {0.5, 1.0, 3.0})
        CHECK(std::exp(g2.log_value_at_positive(r)) == doctest::Approx(std::exp(r) - 1 - r).epsilon(1e-12));
    CHECK(tail_series(g, 0).terms().size() == g.terms().size());
    CHECK(tail_series(g, g.degree() + 1).is_zero());
}

TEST_CASE("Parseval and power-mean ordering") {
    for (const auto& f : random_polynomials(30, 16, 11)) {
        auto q = CircleQuadrature::for_series(f);
        for (double r : {0.3, 1.0, 2.5}) {
            double a = log_mp_mean_quadrature(f, Exponent{2.0}, r, q);
            CHECK(std::fabs(std::expm1(a - log_m2_coefficients(f, r))) <= 1e-10);
            double prev = -std::numeric_limits<double>::infinity();
            for (double p : {0.5, 1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
                double v = log_mp_mean(f, Exponent{p}, r, q);
                CHECK(v >= prev - 1e-9);
                prev = v;
            }
        }
    }
}

TEST_CASE("Hardy convexity") {
    auto grid = default_grid(Domain::plane(), 128);
    auto mono = hardy_convexity_check(PowerSeries::monomial(5, 3.0), Exponent{0.5}, grid);
    CHECK(mono.max_violation == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(hardy_convexity_check(poly({1, 1}), Exponent{2.0}, grid).max_violation >= -1e-9);
    for (const auto& f : random_polynomials(5, 16, 99)) {
        auto h = hardy_convexity_check(f, Exponent{0.5}, grid);
        CHECK(h.max_violation >= -1e-8);
        CHECK(h.monotonicity_violation >= -1e-10);
    }
}

TEST_CASE("random polynomials are reproducible") {
    auto a = random_polynomials(5, 16, 42);
    auto b = random_polynomials(5, 16, 42);
    auto c = random_polynomials(5, 16, 43);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].dense() == b[i].dense());
        CHECK(a[i].degree() <= 16);
    }
    CHECK(a[0].dense() != c[0].dense());
}

TEST_CASE("envelope series for exp") {
    auto grid = default_grid(Domain::plane());
    auto w = WeightSpec::parse(Domain::plane(), "exp(r)");
    auto env = monomial_coefficients(log_transform(w, grid));
    auto g40 = envelope_series(env, 40, 5.0);
    CHECK(g40.series.degree() <= 40);
    double ratio = std::exp(g40.series.log_value_at_positive(5.0) - 5.0);
    CHECK(ratio >= 1.0);
    CHECK_FALSE(g40.truncated);
    auto full = envelope_series(env, std::nullopt, grid.r(grid.size() - 1));
    CHECK_FALSE(full.truncated);
    CHECK(envelope_series(env, 40, grid.r(grid.size() - 1)).truncated);
    for (const auto& line : env.lines()) {
        if (!line.touch_x) continue;
        double r = std::exp(*line.touch_x);
        CHECK(full.series.log_value_at_positive(r) >= env.log_value(Radius::from_r(r)));
    }
}

TEST_CASE("envelope series on the disk stays within a constant of the weight") {
    auto grid = EvaluationGrid::build(Domain::disk(), 256, -std::log(1e-4));
    auto w = WeightSpec::parse(Domain::disk(), "1/(1-r)");
    auto env = monomial_coefficients(log_transform(w, grid));
    auto g = envelope_series(env);
    double sup = 0.0;
    for (const auto& pt : grid.points()) sup = std::max(sup, g.series.log_value_at_positive(pt.r) - w.log_value(pt));
    CHECK(std::isfinite(sup));
    CHECK(sup >= 0.0);
}

TEST_CASE("empirical operator norms") {
    auto grid = default_grid(Domain::plane());
    auto w = WeightSpec::parse(Domain::plane(), "exp(r)");
    auto j = empirical_operator_norm(Operator::J, w, w, monomial_family(20), grid, kInf);
    CHECK(j.lower_bound <= 1.0 + 1e-3);
    CHECK(j.lower_bound > 0.5);
    CHECK(to_string(j.op) == "J");

    auto d = empirical_operator_norm(Operator::D, w, w, {PowerSeries::monomial(0, 1.0)}, grid, kInf);
    CHECK(d.lower_bound == 0.0);

    auto sq = WeightSpec::parse(Domain::plane(), "exp(r^2)");
    double prev = 0.0;
    for (std::uint64_t n : {10, 20, 40}) {
        auto rep = empirical_operator_norm(Operator::D, sq, sq, monomial_family(n), grid, kInf);
        CHECK(rep.lower_bound > prev);
        prev = rep.lower_bound;
    }
    CHECK_THROWS_AS(empirical_operator_norm(Operator::D, w, w, {}, grid, kInf), std::invalid_argument);
}
