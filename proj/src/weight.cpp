#include "weightlab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weightlab {

WeightSpec::WeightSpec(Domain domain, Expr::Ptr expr, std::string label)
    : domain_(domain), expr_(std::move(expr)), label_(std::move(label)) {
    if (!expr_) throw std::invalid_argument("weight expression is empty");
}

WeightSpec WeightSpec::parse(Domain domain, std::string_view text) {
    return WeightSpec(domain, parse_weight_expr(text), std::string(text));
}

double WeightSpec::log_value(const Radius& radius) const {
    LogScalar v = expr_->evaluate(radius);
    if (v.sign <= 0) throw EvaluationError("weight is not positive");
    if (!std::isfinite(v.log_abs)) throw EvaluationError("weight overflows");
    return v.log_abs;
}

double WeightSpec::value(double r) const { return std::exp(log_value(r)); }

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::first_failure() const {
    for (const auto& c : checks) {
        if (!c.passed) return &c;
    }
    return nullptr;
}

double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = std::min(xs.size(), ys.size());
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

ValidationReport validate_weight(const WeightSpec& spec, const EvaluationGrid& grid, const ValidationOptions& options) {
    if (!(spec.domain() == grid.domain())) throw std::invalid_argument("grid domain does not match weight domain");
    ValidationReport report;

    ValidationCheck finite{"finite", true, {}, {}};
    ValidationCheck positive{"positive", true, {}, {}};
    std::vector<double> phi;
    std::vector<double> rs;
    auto sample = [&](const Radius& radius) {
        LogScalar v;
        try {
            v = spec.expr()->evaluate(radius);
        } catch (const EvaluationError& e) {
            if (finite.passed) {
                finite.passed = false;
                finite.detail = std::string(e.what()) + " at r=" + fmt(radius.r);
                finite.witness_radius = radius.r;
            }
            return;
        }
        if (v.sign <= 0) {
            if (positive.passed) {
                positive.passed = false;
                positive.detail = "w(r) <= 0 at r=" + fmt(radius.r);
                positive.witness_radius = radius.r;
            }
            return;
        }
        if (!std::isfinite(v.log_abs)) {
            if (finite.passed) {
                finite.passed = false;
                finite.detail = "w(r) not finite at r=" + fmt(radius.r);
                finite.witness_radius = radius.r;
            }
            return;
        }
        phi.push_back(v.log_abs);
        rs.push_back(radius.r);
    };
    sample(Radius::from_r(0.0));
    for (const auto& p : grid.points()) sample(p);
    report.checks.push_back(finite);
    report.checks.push_back(positive);

    ValidationCheck monotone{"non_decreasing", true, {}, {}};
    for (std::size_t i = 1; i < phi.size(); ++i) {
        double slack = std::max(options.monotone_rel_tol, 4.0 * 2.2e-16 * std::fabs(phi[i]));
        if (phi[i] - phi[i - 1] < -slack) {
            monotone.passed = false;
            monotone.detail = "w decreases between r=" + fmt(rs[i - 1]) + " and r=" + fmt(rs[i]);
            monotone.witness_radius = rs[i];
            break;
        }
    }
    report.checks.push_back(monotone);

    ValidationCheck unbounded{"unbounded", true, {}, {}};
    if (phi.size() < 2 || phi.back() - phi.front() <= std::log(options.unbounded_factor)) {
        unbounded.passed = false;
        unbounded.detail = "w(last)/w(first) does not exceed " + fmt(options.unbounded_factor);
        if (!rs.empty()) unbounded.witness_radius = rs.back();
    }
    report.checks.push_back(unbounded);

    if (spec.domain().is_plane()) {
        ValidationCheck superpoly{"super_polynomial", true, {}, {}};
        std::vector<double> u, v;
        bool usable = phi.size() == grid.size() + 1;
        for (std::size_t i = grid.tail_begin(); usable && i < grid.size(); ++i) {
            double log_r = grid.point(i).log_r;
            double log_w = phi[i + 1];
            if (log_r <= 0.0 || log_w <= 0.0) {
                usable = false;
                superpoly.witness_radius = grid.r(i);
                break;
            }
            u.push_back(std::log(log_r));
            v.push_back(std::log(log_w));
        }
        if (!usable) {
            superpoly.passed = false;
            superpoly.detail = "tail needs r > 1 and w > 1 to test log r = o(log w)";
        } else {
            double slope = regression_slope(u, v);
            if (!(slope > options.superpoly_min_slope)) {
                superpoly.passed = false;
                superpoly.detail = "tail slope of log log w vs log log r is " + fmt(slope) + " <= " +
                                   fmt(options.superpoly_min_slope) + " (polynomial growth)";
                superpoly.witness_radius = grid.r(grid.size() - 1);
            } else {
                superpoly.detail = "tail slope " + fmt(slope);
            }
        }
        report.checks.push_back(superpoly);
    }
    return report;
}

LogTransform log_transform(const WeightSpec& spec, const EvaluationGrid& grid) {
    if (!(spec.domain() == grid.domain())) throw std::invalid_argument("grid domain does not match weight domain");
    LogTransform t(spec, grid);
    t.origin_phi_ = spec.log_value(Radius::from_r(0.0));
    t.samples_.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Radius& p = grid.point(i);
        try {
            t.samples_.push_back({grid.x(i), p.log_r, spec.log_value(p)});
        } catch (const EvaluationError& e) {
            t.dropped_.push_back("x=" + fmt(grid.x(i)) + ": " + e.what());
        }
    }

    const auto& s = t.samples_;
    std::vector<double> slopes;
    for (std::size_t i = 1; i < s.size(); ++i) slopes.push_back((s[i].phi - s[i - 1].phi) / (s[i].s - s[i - 1].s));
    double scale = 1.0;
    for (double sl : slopes) scale = std::max(scale, std::fabs(sl));
    double worst = 0.0;
    for (std::size_t i = 1; i < slopes.size(); ++i) worst = std::min(worst, (slopes[i] - slopes[i - 1]) / scale);
    t.worst_defect_ = worst;
    t.convex_ = s.size() >= 3 && worst >= -1e-9;
    return t;
}

}  // namespace weightlab
