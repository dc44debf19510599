// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "weightlab/criteria.hpp"
#include "weightlab/envelope.hpp"
#include "weightlab/power_series.hpp"
#include "weightlab/report.hpp"

using namespace weightlab;

namespace {

constexpr std::uint64_t kSeed = 20260917;

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, bool cond, const std::string& what) {
    if (!cond) {
        o.pass = false;
        o.detail += (o.detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
}

void note(Outcome& o, const std::string& what) { o.detail += (o.detail.empty() ? "" : "; ") + what; }

std::string num(double x) { return format_short(x); }

struct Built {
    WeightSpec w;
    LogTransform phi;
    MonomialEnvelope env;
    WeightTable table;
};

Built build(Domain d, const std::string& text, const EvaluationGrid& grid) {
    auto w = WeightSpec::parse(d, text);
    auto phi = log_transform(w, grid);
    auto env = monomial_coefficients(phi);
    auto table = associated_weight(env, grid);
    return {w, std::move(phi), std::move(env), std::move(table)};
}

Outcome envelope_tightness() {
    Outcome o;
    auto grid = default_grid(Domain::plane());
    auto b = build(Domain::plane(), "exp(r)", grid);
    double worst_below = 0.0, c = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double lw = b.w.log_value(grid.point(i));
        double lh = b.table.log_value(i);
        worst_below = std::max(worst_below, std::expm1(lh - lw));
        c = std::max(c, std::exp(lw - lh - std::log1p(grid.r(i))));
    }
    require(o, worst_below <= 1e-6, "w_hat <= w (excess " + num(worst_below) + ")");
    require(o, c <= std::exp(1.0) * (1.0 + 1e-6), "C <= e(1+1e-6)");
    double coeff_err = 0.0;
    int compared = 0;
    const double x_end = grid.x(grid.size() - 1);
    for (const auto& line : b.env.lines()) {
        double n = static_cast<double>(line.slope);
        // the closed form needs the minimiser r = n inside the grid
        if (line.slope > 0 && std::log(n) >= x_end) continue;
        ++compared;
        double exact = line.slope == 0 ? 0.0 : n * (1.0 - std::log(n));  // log (e/n)^n
        coeff_err = std::max(coeff_err, std::fabs(line.intercept - exact) / std::max(1.0, std::fabs(exact)));
    }
    require(o, coeff_err <= 1e-6, "coefficients match (e/n)^n (rel err " + num(coeff_err) + ")");
    note(o, "C=" + num(c) + " coeff_rel_err=" + num(coeff_err) + " over " + std::to_string(compared) + " slopes");
    return o;
}

Outcome disk_sandwich() {
    Outcome o;
    for (const char* text : {"1/(1-r)", "1/(1-r)^2"}) {
        double ratios[2];
        std::size_t sizes[2] = {256, 512};
        for (int k = 0; k < 2; ++k) {
            auto grid = default_grid(Domain::disk(), sizes[k]);
            auto b = build(Domain::disk(), text, grid);
            ratios[k] = sandwich_constants(b.w, b.table).plain_ratio;
        }
        double change = std::fabs(ratios[1] - ratios[0]) / ratios[0];
        require(o, std::isfinite(ratios[1]) && ratios[1] < 10.0, std::string(text) + " sup w/w_hat < 10");
        require(o, change < 0.01, std::string(text) + " refinement change < 1%");
        note(o, std::string(text) + ": " + num(ratios[0]) + " -> " + num(ratios[1]));
    }
    return o;
}

Outcome j_closed_forms() {
    Outcome o;
    auto grid = default_grid(Domain::plane());
    auto b = build(Domain::plane(), "exp(r)", grid);
    auto v = WeightSpec::parse(Domain::plane(), "exp(r)");
    auto bounded = check_integration_bounded(b.table, v, grid);
    auto compact = check_integration_compact(b.table, v, grid);
    require(o, bounded.status == Status::SATISFIED, "J_BOUNDED SATISFIED");
    require(o, std::fabs(bounded.constant - 1.0) <= 1e-3, "J_BOUNDED constant within 1e-3 of 1");
    require(o, compact.status == Status::VIOLATED, "J_COMPACT VIOLATED");
    double tail = compact.auxiliary.at("final_ratio");
    require(o, tail >= 0.999 && tail <= 1.001, "J_COMPACT tail ratio in [0.999, 1.001]");
    auto v2 = WeightSpec::parse(Domain::plane(), "exp(2*r)");
    auto compact2 = check_integration_compact(b.table, v2, grid);
    double at30 = std::exp(log_integrated_envelope(b.env, Radius::from_r(30.0)) - v2.log_value(30.0));
    require(o, compact2.status == Status::SATISFIED, "v=exp(2r) J_COMPACT SATISFIED");
    require(o, at30 < 1e-10, "ratio at r=30 < 1e-10");
    note(o, "C=" + num(bounded.constant) + " tail=" + num(tail) + " ratio(30)=" + num(at30));
    return o;
}

Outcome doubling_exactness() {
    Outcome o;
    for (int alpha : {1, 2, 3}) {
        auto w = WeightSpec::parse(Domain::disk(), "1/(1-r)^" + std::to_string(alpha));
        auto v = doubling_constant(w);
        double err = std::fabs(v.constant - std::ldexp(1.0, alpha));
        require(o, v.status == Status::SATISFIED && err <= 1e-12, "alpha=" + std::to_string(alpha) + " d=2^alpha");
        note(o, "alpha=" + std::to_string(alpha) + " err=" + num(err));
    }
    auto v = doubling_constant(WeightSpec::parse(Domain::disk(), "exp(1/(1-r))"));
    bool growing = v.evidence.size() >= 9;
    for (std::size_t i = v.evidence.size() - 7; growing && i < v.evidence.size(); ++i)
        growing = v.evidence[i].log_ratio() > v.evidence[i - 1].log_ratio();
    require(o, v.status == Status::VIOLATED, "exp(1/(1-r)) VIOLATED");
    require(o, growing, "ratios grow over the last 8 indices");
    return o;
}

Outcome disk_iff() {
    Outcome o;
    auto grid = default_grid(Domain::disk());
    auto w = WeightSpec::parse(Domain::disk(), "1/(1-r)^2");
    auto suff = check_differentiation_sufficient_disk(w, weighted_target(w), grid);
    require(o, suff.status == Status::SATISFIED, "sufficient-disk SATISFIED");
    require(o, suff.constant <= 16.0 + 1e-6, "constant <= d^2 + 1e-6");
    auto b = build(Domain::disk(), "exp(1/(1-r))", grid);
    auto vt = weighted_target(b.w);
    auto vphi = log_transform(vt, grid);
    auto vtable = associated_weight(monomial_coefficients(vphi), grid);
    NecessaryOptions opts;
    opts.w_log_convex = b.phi.convex();
    opts.v_log_convex = vphi.convex();
    auto nec = check_differentiation_necessary(b.table, vtable, Exponent{2.0}, opts);
    require(o, nec.status == Status::VIOLATED, "exp(1/(1-r)) necessary VIOLATED at p=2");
    note(o, "suff C=" + num(suff.constant) + " necessary=" + to_string(nec.status));
    return o;
}

Outcome plane_iff() {
    Outcome o;
    auto grid = default_grid(Domain::plane());
    auto b = build(Domain::plane(), "exp(r)", grid);
    auto self = check_D_self_plane(b.table, b.w, Exponent{2.0});
    require(o, self.status == Status::SATISFIED, "exp(r) D_SELF_PLANE SATISFIED");
    require(o, self.auxiliary.at("implication_ok") == 1.0, "(i) => (ii) implication");
    auto b2 = build(Domain::plane(), "exp(r^2)", grid);
    auto self2 = check_D_self_plane(b2.table, b2.w, Exponent{2.0});
    require(o, self2.status == Status::VIOLATED, "exp(r^2) D_SELF_PLANE VIOLATED");
    auto rep = empirical_operator_norm(Operator::D, b2.w, b2.w, monomial_family(40), grid, Exponent::infinity());
    // closed-form grid-free value of the same lower bound
    double exact = 0.0;
    for (int n = 2; n <= 40; ++n) {
        double m = n - 1;
        double lr = std::log(n) + 0.5 * m * std::log(m / (2.0 * std::exp(1.0))) -
                    0.5 * n * std::log(n / (2.0 * std::exp(1.0)));
        exact = std::max(exact, std::exp(lr));
    }
    require(o, rep.lower_bound > 10.0, "oracle D norm over monomials n<=40 exceeds 10");
    note(o, "oracle=" + num(rep.lower_bound) + " closed_form=" + num(exact) + " at " + rep.argmax_sample);
    return o;
}

Outcome hardy_suite() {
    Outcome o;
    auto grid = default_grid(Domain::plane());
    auto polys = random_polynomials(100, 16, kSeed);
    double worst = 0.0, mono = 0.0;
    for (const auto& f : polys)
        for (double p : {0.5, 1.0, 2.0, 4.0}) {
            auto h = hardy_convexity_check(f, Exponent{p}, grid);
            worst = std::min(worst, h.max_violation);
            mono = std::min(mono, h.monotonicity_violation);
        }
    require(o, worst >= -1e-8, "max_violation >= -1e-8");
    require(o, mono >= std::log1p(-1e-10), "M_p non-decreasing in r within 1e-10");
    note(o, "worst=" + num(worst) + " monotone=" + num(mono));
    return o;
}

Outcome quadrature() {
    Outcome o;
    auto polys = random_polynomials(100, 16, kSeed + 1);
    const double radii[] = {0.05, 0.2, 0.5, 0.8, 0.99, 1.0, 1.5, 3.0, 10.0, 50.0};
    double parseval = 0.0, order = 0.0;
    for (const auto& f : polys) {
        auto q = CircleQuadrature::for_series(f);
        for (double r : radii) {
            double a = log_mp_mean_quadrature(f, Exponent{2.0}, r, q);
            double b = log_m2_coefficients(f, r);
            parseval = std::max(parseval, std::fabs(std::expm1(a - b)));
            double prev = -std::numeric_limits<double>::infinity();
            for (double p : {0.5, 1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
                double v = log_mp_mean(f, Exponent{p}, r, q);
                if (std::isfinite(prev)) order = std::min(order, std::expm1(v - prev));
                prev = v;
            }
        }
    }
    require(o, parseval <= 1e-10, "quadrature M_2 vs coefficients within 1e-10");
    require(o, order >= -1e-9, "M_p non-decreasing in p within 1e-9");
    note(o, "parseval=" + num(parseval) + " p_order=" + num(order));
    return o;
}

Outcome test_functions() {
    Outcome o;
    auto grid = default_grid(Domain::plane());
    auto b = build(Domain::plane(), "exp(r)", grid);
    auto g = envelope_series(b.env, std::nullopt, grid.r(grid.size() - 1));
    double below = 0.0, c = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double lg = g.series.log_value_at_positive(grid.r(i));
        below = std::max(below, b.table.log_value(i) - lg);
        c = std::max(c, std::exp(lg - b.w.log_value(grid.point(i))));
    }
    require(o, below <= 1e-9, "w_hat <= g");
    require(o, c < 20.0, "sup g/w < 20");
    auto int_g2 = apply_J(tail_series(g.series, 2));
    std::optional<double> r0;
    for (std::size_t i = grid.size(); i-- > 0;) {
        double r = grid.r(i);
        double lhs = int_g2.log_value_at_positive(r);
        double rhs = r + std::log(-std::expm1(-r));  // log(e^r - 1)
        if (lhs < rhs) break;
        r0 = r;
    }
    require(o, r0.has_value(), "int g_2 >= int w on a grid tail");
    note(o, "C=" + num(c) + (r0 ? " r0=" + num(*r0) : std::string(" r0=none")) +
                " truncated=" + (g.truncated ? "true" : "false"));
    return o;
}

Outcome oracle_soundness() {
    Outcome o;
    struct Case {
        Domain d;
        const char* w;
        const char* v;
    };
    const Case cases[] = {
        {Domain::plane(), "exp(r)", "exp(r)"},
        {Domain::plane(), "exp(r)", "exp(2*r)"},
        {Domain::disk(), "1/(1-r)^2", "1/(1-r)"},
        {Domain::disk(), "1/(1-r)^3", "1/(1-r)^2"},
    };
    int checked = 0;
    for (const auto& c : cases) {
        auto grid = default_grid(c.d);
        auto b = build(c.d, c.w, grid);
        auto v = WeightSpec::parse(c.d, c.v);
        auto verdict = check_integration_bounded(b.table, v, grid);
        if (verdict.status != Status::SATISFIED) continue;
        std::vector<PowerSeries> samples = monomial_family(40);
        auto g = envelope_series(b.env).series;
        samples.push_back(g);
        samples.push_back(tail_series(g, 2));
        for (auto& f : random_polynomials(16, 16, kSeed + 2)) samples.push_back(std::move(f));
        auto rep = empirical_operator_norm(Operator::J, b.w, v, samples, grid, Exponent::infinity());
        require(o, rep.lower_bound <= verdict.constant + 1e-3,
                std::string(c.w) + " -> " + c.v + ": " + num(rep.lower_bound) + " <= " + num(verdict.constant));
        note(o, std::string(c.w) + "->" + c.v + " " + num(rep.lower_bound) + "<=" + num(verdict.constant));
        ++checked;
    }
    require(o, checked > 0, "at least one SATISFIED J verdict");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> suite = {
        {"1 envelope tightness", envelope_tightness},
        {"2 disk sandwich", disk_sandwich},
        {"3 J closed forms", j_closed_forms},
        {"4 doubling exactness", doubling_exactness},
        {"5 disk D characterisation", disk_iff},
        {"6 plane D characterisation", plane_iff},
        {"7 Hardy convexity", hardy_suite},
        {"8 quadrature correctness", quadrature},
        {"9 test-function fidelity", test_functions},
        {"10 oracle soundness", oracle_soundness},
    };
    int failed = 0;
    for (const auto& [name, fn] : suite) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s [%s] %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(suite.size()) - failed, suite.size());
    return failed ? 1 : 0;
}
