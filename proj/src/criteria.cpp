#include "weightlab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace weightlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

GridInfo info(const EvaluationGrid& grid) { return {grid.domain(), grid.size(), grid.extent()}; }

void require_same_grid(const EvaluationGrid& a, const EvaluationGrid& b) {
    if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

double sup_log_ratio(const std::vector<RatioSample>& rows) {
    double best = kNegInf;
    for (const auto& row : rows) {
        double lr = row.log_ratio();
        if (std::isnan(lr)) return std::numeric_limits<double>::quiet_NaN();
        best = std::max(best, lr);
    }
    return best;
}

/// Log-ratio increments are all <= a rounding-level slack.
bool non_increasing(const std::vector<double>& ys) {
    for (std::size_t i = 1; i < ys.size(); ++i) {
        double slack = 1e-12 * std::max(1.0, std::fabs(ys[i]));
        if (ys[i] - ys[i - 1] > slack) return false;
    }
    return true;
}

void note_c_p(Verdict& v) {
    v.notes.push_back(
        "constant is the structural weight-inequality constant; the operator norm bound carries an "
        "additional unquantified p-dependent factor C_p from the integral-means estimate");
}

}  // namespace

void classify_tail(Verdict& verdict, const std::vector<double>& xs, const VerdictThresholds& thresholds) {
    const auto& rows = verdict.evidence;
    if (rows.empty() || rows.size() != xs.size()) {
        verdict.status = Status::INCONCLUSIVE;
        verdict.notes.push_back("no evaluable ratio samples");
        return;
    }
    const double sup = sup_log_ratio(rows);
    verdict.constant = std::exp(sup);
    const std::size_t begin = rows.size() - std::max<std::size_t>(2, rows.size() / 4);
    std::vector<double> tx, ty;
    for (std::size_t i = begin; i < rows.size(); ++i) {
        tx.push_back(xs[i]);
        ty.push_back(rows[i].log_ratio());
    }
    bool finite_tail = std::all_of(ty.begin(), ty.end(), [](double y) { return std::isfinite(y); });
    verdict.tail_slope = finite_tail ? regression_slope(tx, ty) : std::numeric_limits<double>::quiet_NaN();
    if (!finite_tail || std::isnan(sup)) {
        verdict.status = Status::INCONCLUSIVE;
        verdict.notes.push_back("non-finite ratio in the tail");
    } else if (verdict.tail_slope >= thresholds.growth_slope) {
        verdict.status = Status::VIOLATED;
    } else if (std::isfinite(sup)) {
        verdict.status = Status::SATISFIED;
    } else {
        verdict.status = Status::INCONCLUSIVE;
    }
}

Verdict check_integration_bounded(const WeightTable& w_table, const WeightSpec& v, const EvaluationGrid& grid,
                                  const VerdictThresholds& thresholds) {
    require_same_grid(w_table.grid(), grid);
    if (!(v.domain() == grid.domain())) throw std::invalid_argument("grid mismatch: target weight domain differs");
    Verdict out;
    out.criterion = Criterion::J_BOUNDED;
    out.p = Exponent::infinity();
    out.grid = info(grid);
    const auto integrals = log_integrated_envelope(w_table.envelope(), grid.points());
    std::vector<double> xs;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double log_v = 0.0;
        try {
            log_v = v.log_value(grid.point(i));
        } catch (const EvaluationError& e) {
            out.notes.push_back("target evaluation stopped at r=" + std::to_string(grid.r(i)) + ": " + e.what());
            break;
        }
        out.evidence.push_back({grid.r(i), integrals[i], log_v});
        xs.push_back(grid.x(i));
    }
    classify_tail(out, xs, thresholds);
    return out;
}

Verdict check_integration_compact(const WeightTable& w_table, const WeightSpec& v, const EvaluationGrid& grid,
                                  const VerdictThresholds& thresholds) {
    if (!grid.domain().is_plane()) throw std::invalid_argument("compactness criterion is stated on the plane");
    Verdict bounded = check_integration_bounded(w_table, v, grid, thresholds);
    Verdict out = bounded;
    out.criterion = Criterion::J_COMPACT;
    out.notes.clear();
    out.auxiliary["bounded_constant"] = bounded.constant;
    out.auxiliary["bounded_status"] = static_cast<double>(bounded.status);
    if (out.evidence.empty()) {
        out.status = Status::INCONCLUSIVE;
        return out;
    }
    const std::size_t begin = out.evidence.size() - std::max<std::size_t>(2, out.evidence.size() / 4);
    std::vector<double> tail;
    for (std::size_t i = begin; i < out.evidence.size(); ++i) tail.push_back(out.evidence[i].log_ratio());
    const double final_log = tail.back();
    out.auxiliary["final_ratio"] = std::exp(final_log);
    out.auxiliary["final_log_ratio"] = final_log;
    if (non_increasing(tail) && final_log < std::log(thresholds.compact_final)) {
        out.status = Status::SATISFIED;
    } else if (bounded.status == Status::SATISFIED && final_log > std::log(thresholds.noncompact_final) &&
               std::fabs(out.tail_slope) < thresholds.growth_slope) {
        out.status = Status::VIOLATED;
        out.notes.push_back("ratio tail stays bounded away from 0");
    } else {
        out.status = Status::INCONCLUSIVE;
    }
    return out;
}

Verdict doubling_constant(const WeightSpec& w, int n_max, const VerdictThresholds& thresholds) {
    if (!w.domain().is_disk()) throw std::invalid_argument("doubling is defined for disk weights");
    if (n_max < 8) throw std::invalid_argument("doubling needs n_max >= 8");
    Verdict out;
    out.criterion = Criterion::DOUBLING;
    out.p = Exponent::infinity();
    out.grid = {w.domain(), static_cast<std::size_t>(n_max) + 1, static_cast<double>(n_max)};
    std::vector<double> ns;
    for (int n = 0; n <= n_max; ++n) {
        const Radius inner = Radius::from_complement(std::ldexp(1.0, -n));
        const Radius outer = Radius::from_complement(std::ldexp(1.0, -n - 1));
        try {
            out.evidence.push_back({inner.r, w.log_value(outer), w.log_value(inner)});
        } catch (const EvaluationError& e) {
            out.notes.push_back("n_max truncated to " + std::to_string(n - 1) + ": " + e.what());
            break;
        }
        ns.push_back(n);
    }
    if (out.evidence.size() < 9) {
        out.status = Status::INCONCLUSIVE;
        out.notes.push_back("fewer than 9 dyadic ratios available");
        return out;
    }
    out.constant = std::exp(sup_log_ratio(out.evidence));
    std::vector<double> tx(ns.end() - 8, ns.end()), ty;
    for (std::size_t i = out.evidence.size() - 8; i < out.evidence.size(); ++i) ty.push_back(out.evidence[i].log_ratio());
    out.tail_slope = regression_slope(tx, ty);
    bool growing = true;
    for (std::size_t i = 1; i < ty.size(); ++i) growing = growing && ty[i] > ty[i - 1];
    double lo = *std::min_element(ty.begin(), ty.end());
    double hi = *std::max_element(ty.begin(), ty.end());
    bool flat = hi - lo <= 1e-12 * std::max(1.0, std::fabs(hi));
    if (growing && out.tail_slope >= thresholds.growth_slope) {
        out.status = Status::VIOLATED;
    } else if ((non_increasing(ty) || flat) && std::isfinite(out.constant)) {
        out.status = Status::SATISFIED;
    } else {
        out.status = Status::INCONCLUSIVE;
    }
    out.auxiliary["log_constant"] = sup_log_ratio(out.evidence);
    return out;
}

Verdict check_differentiation_necessary(const WeightTable& w_table, const WeightTable& v_table, Exponent p,
                                        const NecessaryOptions& options) {
    require_same_grid(w_table.grid(), v_table.grid());
    const auto& grid = w_table.grid();
    Verdict out;
    out.criterion = Criterion::D_NECESSARY;
    out.p = p;
    out.grid = info(grid);
    if (p.value < 1.0) {
        out.status = Status::INCONCLUSIVE;
        out.notes.push_back("no necessary condition available for p < 1");
        return out;
    }
    std::vector<double> xs;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid.r(i) > 0.0)) continue;
        out.evidence.push_back({grid.r(i), w_table.log_right_derivatives()[i], v_table.log_value(i)});
        xs.push_back(grid.x(i));
    }
    classify_tail(out, xs, options.thresholds);
    if (grid.domain().is_disk() && out.status == Status::VIOLATED &&
        (options.w_log_convex == false || options.v_log_convex == false)) {
        out.status = Status::INCONCLUSIVE;
        out.notes.push_back("envelope is only a one-sided proxy for non-log-convex disk weights");
    }
    return out;
}

Verdict check_differentiation_sufficient_disk(const WeightSpec& w, const WeightSpec& v, const EvaluationGrid& grid,
                                              const VerdictThresholds& thresholds) {
    if (!grid.domain().is_disk() || !w.domain().is_disk() || !v.domain().is_disk()) {
        throw std::invalid_argument("disk criterion needs disk weights and grid");
    }
    Verdict out;
    out.criterion = Criterion::D_SUFF_DISK;
    out.p = Exponent::any();
    out.grid = info(grid);
    std::vector<double> xs;
    auto visit = [&](const Radius& p, double x) {
        const Radius mid = Radius::from_complement(0.5 * p.complement);
        out.evidence.push_back({p.r, w.log_value(mid), std::log(p.complement) + v.log_value(p)});
        xs.push_back(x);
    };
    try {
        for (std::size_t i = 0; i < grid.size(); ++i) visit(grid.point(i), grid.x(i));
    } catch (const EvaluationError& e) {
        out.notes.push_back(std::string("scan truncated near r = 1: ") + e.what());
    }
    classify_tail(out, xs, thresholds);
    if (out.status == Status::SATISFIED) out.notes.push_back("bounded for all 0 < p < inf");
    note_c_p(out);
    return out;
}

Verdict check_differentiation_sufficient_plane(const WeightSpec& w, const WeightSpec& v, const EvaluationGrid& grid,
                                               const VerdictThresholds& thresholds) {
    if (!grid.domain().is_plane() || !w.domain().is_plane() || !v.domain().is_plane()) {
        throw std::invalid_argument("plane criterion needs plane weights and grid");
    }
    Verdict out;
    out.criterion = Criterion::D_SUFF_PLANE;
    out.p = Exponent::any();
    out.grid = info(grid);
    std::vector<double> xs;
    try {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Radius& p = grid.point(i);
            const Radius shifted{1.0 + p.r, std::log1p(p.r), -p.r};
            out.evidence.push_back({p.r, w.log_value(shifted), v.log_value(p)});
            xs.push_back(grid.x(i));
        }
    } catch (const EvaluationError& e) {
        out.notes.push_back(std::string("scan truncated: ") + e.what());
    }
    classify_tail(out, xs, thresholds);
    if (out.status == Status::SATISFIED) out.notes.push_back("bounded for all 0 < p < inf");
    note_c_p(out);
    return out;
}

Verdict check_D_self_plane(const WeightTable& w_table, const WeightSpec& w, Exponent p,
                           const VerdictThresholds& thresholds) {
    const auto& grid = w_table.grid();
    if (!grid.domain().is_plane()) throw std::invalid_argument("self-map criterion is stated on the plane");
    Verdict growth;  // (i) log w_hat(r) <= C r
    growth.criterion = Criterion::D_SELF_PLANE;
    Verdict deriv;  // (ii) w_hat'(r) <= C w(r)
    deriv.criterion = Criterion::D_SELF_PLANE;
    std::vector<double> xs;
    double constant_i = kNegInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Radius& pt = grid.point(i);
        if (pt.r < 1.0) continue;
        const double log_hat = w_table.log_value(i);
        constant_i = std::max(constant_i, log_hat / pt.r);
        growth.evidence.push_back({pt.r, log_hat > 0.0 ? std::log(log_hat) : kNegInf, pt.log_r});
        deriv.evidence.push_back({pt.r, w_table.log_right_derivatives()[i], w.log_value(pt)});
        xs.push_back(grid.x(i));
    }
    classify_tail(growth, xs, thresholds);
    classify_tail(deriv, xs, thresholds);

    Verdict out = growth;
    out.p = p;
    out.grid = info(grid);
    out.constant = constant_i;
    out.auxiliary["constant_ii"] = deriv.constant;
    out.auxiliary["tail_slope_ii"] = deriv.tail_slope;
    out.auxiliary["status_i"] = static_cast<double>(growth.status);
    out.auxiliary["status_ii"] = static_cast<double>(deriv.status);
    const bool implication_ok = growth.status != Status::SATISFIED || deriv.status == Status::SATISFIED;
    out.auxiliary["implication_ok"] = implication_ok ? 1.0 : 0.0;
    for (const auto& n : deriv.notes) out.notes.push_back("(ii): " + n);

    if (!implication_ok) {
        out.status = Status::INCONCLUSIVE;
        out.notes.push_back("(i) holds on the grid but (ii) does not; grid too coarse to decide");
    } else if (growth.status == Status::SATISFIED && deriv.status == Status::SATISFIED) {
        out.status = Status::SATISFIED;
    } else if (growth.status == Status::VIOLATED || deriv.status == Status::VIOLATED) {
        out.status = Status::VIOLATED;
    } else {
        out.status = Status::INCONCLUSIVE;
    }
    if (out.status == Status::VIOLATED && p.value < 1.0) {
        out.status = Status::INCONCLUSIVE;
        out.notes.push_back("necessity is not available for p < 1");
    }
    return out;
}

Verdict check_D_disk_weighted_target(const WeightSpec& w, Exponent p, int n_max, bool w_log_convex,
                                     const VerdictThresholds& thresholds) {
    Verdict d = doubling_constant(w, n_max, thresholds);
    Verdict out = d;
    out.criterion = Criterion::D_DISK_TARGET;
    out.p = p;
    out.auxiliary["doubling_constant"] = d.constant;
    out.auxiliary["log_convex"] = w_log_convex ? 1.0 : 0.0;
    if (d.status == Status::SATISFIED) {
        out.notes.push_back("doubling: D into H^p_{w/(1-r)} bounded for all 0 < p < inf");
    } else if (d.status == Status::VIOLATED) {
        if (!w_log_convex || p.value < 1.0) {
            out.status = Status::INCONCLUSIVE;
            out.notes.push_back(w_log_convex ? "not doubling, but necessity needs p >= 1"
                                             : "not doubling, but necessity needs a log-convex weight");
        } else {
            out.notes.push_back("log-convex and not doubling: D is unbounded");
        }
    }
    return out;
}

Verdict check_D_disk_weighted_target(const WeightSpec& w, Exponent p, int n_max) {
    const auto phi = log_transform(w, default_grid(Domain::disk()));
    return check_D_disk_weighted_target(w, p, n_max, phi.convex());
}

WeightSpec weighted_target(const WeightSpec& w) {
    auto one_minus_r = Expr::binary(ExprKind::Sub, Expr::number(1.0), Expr::var());
    return WeightSpec(w.domain(), Expr::binary(ExprKind::Div, w.expr(), one_minus_r), "(" + w.label() + ")/(1-r)");
}

}  // namespace weightlab
