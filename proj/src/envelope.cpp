#include "weightlab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace weightlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRefineTol = 1e-10;
constexpr double kPruneSlack = 1e-9;
constexpr int kTieCap = 16;
constexpr std::int64_t kSlopeCeiling = std::int64_t{1} << 62;

double prune_slack(double magnitude) { return std::max(kPruneSlack, 1e-15 * std::fabs(magnitude)); }

/// Grid-exact conjugate through the lower convex hull of the samples, plus
/// the local refinement against the weight itself.
class ConjugateSolver {
public:
    explicit ConjugateSolver(const LogTransform& phi) : phi_(phi), samples_(phi.samples()) {
        if (samples_.size() < 2) throw std::invalid_argument("log transform needs at least 2 samples");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            while (hull_.size() >= 2) {
                const auto& a = samples_[hull_[hull_.size() - 2]];
                const auto& b = samples_[hull_.back()];
                const auto& c = samples_[i];
                // drop b if it lies on or above the chord a-c
                if ((b.phi - a.phi) * (c.s - a.s) >= (c.phi - a.phi) * (b.s - a.s)) {
                    hull_.pop_back();
                } else {
                    break;
                }
            }
            hull_.push_back(i);
        }
        for (std::size_t j = 0; j + 1 < hull_.size(); ++j) {
            const auto& a = samples_[hull_[j]];
            const auto& b = samples_[hull_[j + 1]];
            edge_slopes_.push_back((b.phi - a.phi) / (b.s - a.s));
        }
        min_phi_ = phi.origin_phi();
        for (const auto& s : samples_) min_phi_ = std::min(min_phi_, s.phi);
    }

    const std::vector<double>& edge_slopes() const { return edge_slopes_; }

    /// Slope of the hull edge to the right of sample i (inf past the end).
    double hull_slope_right_of(std::size_t i) const {
        auto it = std::upper_bound(hull_.begin(), hull_.end(), i);
        if (it == hull_.end()) return std::numeric_limits<double>::infinity();
        std::size_t j = static_cast<std::size_t>(it - hull_.begin());
        // edge j-1 contains sample i; refined touch points can sit one
        // cell further right, so report the following edge
        if (j < edge_slopes_.size()) return edge_slopes_[j];
        return std::numeric_limits<double>::infinity();
    }

    const Conjugate& conjugate(std::int64_t n) {
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(n, compute(n)).first->second;
    }

    /// a_n + n*s_i.
    double line_at_sample(std::int64_t n, std::size_t i) {
        return -conjugate(n).value + static_cast<double>(n) * samples_[i].s;
    }

private:
    Conjugate compute(std::int64_t n) {
        if (n == 0) {
            if (phi_.origin_phi() <= min_phi_) return {-phi_.origin_phi(), std::nullopt};
            for (const auto& s : samples_) {
                if (s.phi == min_phi_) return {-s.phi, s.x};
            }
        }
        const double dn = static_cast<double>(n);
        std::size_t j = static_cast<std::size_t>(
            std::lower_bound(edge_slopes_.begin(), edge_slopes_.end(), dn) - edge_slopes_.begin());
        std::size_t idx = hull_[j];
        Conjugate best{dn * samples_[idx].s - samples_[idx].phi, samples_[idx].x};

        double lo = samples_[idx == 0 ? 0 : idx - 1].x;
        double hi = samples_[std::min(idx + 1, samples_.size() - 1)].x;
        auto objective = [&](double x) {
            try {
                Radius r = phi_.grid().radius_at(x);
                return dn * r.log_r - phi_.weight().log_value(r);
            } catch (const EvaluationError&) {
                return kNegInf;
            }
        };
        while (hi - lo > kRefineTol) {
            double m1 = lo + (hi - lo) / 3.0;
            double m2 = hi - (hi - lo) / 3.0;
            if (objective(m1) < objective(m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        double x = 0.5 * (lo + hi);
        double v = objective(x);
        if (v > best.value) best = {v, x};
        return best;
    }

    const LogTransform& phi_;
    const std::vector<LogTransform::Sample>& samples_;
    std::vector<std::size_t> hull_;
    std::vector<double> edge_slopes_;
    double min_phi_ = 0.0;
    std::map<std::int64_t, Conjugate> cache_;
};

std::int64_t to_slope(double v, std::int64_t cap) {
    if (!(v > 0.0)) return 0;
    if (v >= static_cast<double>(cap)) return cap;
    return static_cast<std::int64_t>(std::floor(v));
}

}  // namespace

Conjugate legendre_conjugate(const LogTransform& phi, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("slope must be non-negative");
    ConjugateSolver solver(phi);
    return solver.conjugate(n);
}

MonomialEnvelope::MonomialEnvelope(Domain domain, std::string source, std::vector<SupportingLine> lines,
                                   std::int64_t n_max, bool truncated)
    : domain_(domain), source_(std::move(source)), lines_(std::move(lines)), n_max_(n_max), truncated_(truncated) {
    if (lines_.empty()) throw std::invalid_argument("envelope needs at least one line");
    std::sort(lines_.begin(), lines_.end(), [](const auto& a, const auto& b) { return a.slope < b.slope; });
    for (std::size_t i = 1; i < lines_.size(); ++i) {
        if (lines_[i].slope == lines_[i - 1].slope) throw std::invalid_argument("duplicate envelope slope");
    }
    // Upper envelope of the lines (slopes already increasing).
    auto crossing = [&](std::size_t a, std::size_t b) {
        return (lines_[a].intercept - lines_[b].intercept) /
               static_cast<double>(lines_[b].slope - lines_[a].slope);
    };
    for (std::size_t i = 0; i < lines_.size(); ++i) {
        while (!upper_.empty()) {
            if (upper_.size() == 1) {
                // a steeper line can only be dominated if it is never above
                break;
            }
            std::size_t a = upper_[upper_.size() - 2];
            std::size_t b = upper_.back();
            if (crossing(a, i) <= crossing(a, b)) {
                upper_.pop_back();
            } else {
                break;
            }
        }
        upper_.push_back(i);
    }
    for (std::size_t j = 0; j + 1 < upper_.size(); ++j) breaks_.push_back(crossing(upper_[j], upper_[j + 1]));
}

std::optional<double> MonomialEnvelope::intercept(std::int64_t slope) const {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), slope,
                               [](const SupportingLine& l, std::int64_t n) { return l.slope < n; });
    if (it == lines_.end() || it->slope != slope) return std::nullopt;
    return it->intercept;
}

std::size_t MonomialEnvelope::upper_index_at(double s) const {
    // breakpoint ties go to the steeper line
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    std::size_t j = static_cast<std::size_t>(it - breaks_.begin());
    if (j > 0 && breaks_[j - 1] == s) return upper_[j];
    return upper_[j];
}

double MonomialEnvelope::log_value(const Radius& radius) const {
    if (radius.r <= 0.0) {
        return lines_.front().slope == 0 ? lines_.front().intercept : kNegInf;
    }
    return lines_[upper_index_at(radius.log_r)].at(radius.log_r);
}

std::int64_t MonomialEnvelope::active_slope(const Radius& radius) const {
    if (radius.r <= 0.0) return lines_.front().slope;
    return lines_[upper_index_at(radius.log_r)].slope;
}

MonomialEnvelope monomial_coefficients(const LogTransform& phi, std::optional<std::int64_t> n_max) {
    ConjugateSolver solver(phi);
    const auto& samples = phi.samples();
    const std::size_t last = samples.size() - 1;

    auto at_boundary = [&](std::int64_t n) {
        const auto& c = solver.conjugate(n);
        return c.touch_x && *c.touch_x >= samples[last].x - 2.0 * kRefineTol;
    };
    // Smallest slope whose supporting line touches at the right end.
    std::int64_t right_slope = 0;
    {
        std::int64_t lo = to_slope(solver.edge_slopes().back(), kSlopeCeiling);
        std::int64_t hi = std::max<std::int64_t>(1, lo);
        while (!at_boundary(hi) && hi < kSlopeCeiling) hi = std::min(kSlopeCeiling, 2 * hi);
        while (lo < hi) {
            std::int64_t mid = lo + (hi - lo) / 2;
            if (at_boundary(mid)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        right_slope = lo;
    }
    const std::int64_t cap = n_max ? *n_max : std::min(kSlopeCeiling, right_slope + 8);
    if (cap < 1) throw std::invalid_argument("n_max must be at least 1");

    std::map<std::int64_t, bool> keep;
    keep[0] = true;
    std::int64_t start = 0;
    std::int64_t smallest_at_end = 0;
    auto touch_of = [&](std::int64_t n) {
        const auto& c = solver.conjugate(n);
        return c.touch_x ? *c.touch_x : -std::numeric_limits<double>::infinity();
    };
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto f = [&](std::int64_t n) { return solver.line_at_sample(n, i); };
        // Touch points are non-decreasing in the slope; the best integer
        // line at x_i is the first one touching at or after x_i, or the one
        // before it. Comparing touch points instead of line values keeps
        // this stable when slopes are so large that neighbouring lines
        // differ by less than rounding.
        const double xi = samples[i].x;
        std::int64_t lo = start;
        std::int64_t hi = std::min(cap, std::max(lo, to_slope(solver.hull_slope_right_of(i), cap) + 1));
        while (hi < cap && touch_of(hi) < xi) {
            lo = hi + 1;
            hi = hi > cap / 2 ? cap : std::max(2 * hi, lo);
        }
        while (lo < hi) {
            std::int64_t mid = lo + (hi - lo) / 2;
            if (touch_of(mid) >= xi) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        std::int64_t best = lo;
        if (best > 0 && f(best - 1) >= f(best)) --best;
        const double top = f(best);
        const double slack = prune_slack(top);
        std::int64_t left = best;
        for (int k = 0; k < kTieCap && left > 0 && f(left - 1) >= top - slack; ++k) --left;
        std::int64_t right = best;
        for (int k = 0; k < kTieCap && right < cap && f(right + 1) >= top - slack; ++k) ++right;
        for (std::int64_t n = left; n <= right; ++n) keep[n] = true;
        start = std::max<std::int64_t>(0, lo - 1);
        if (i == last) smallest_at_end = left;
    }

    std::vector<SupportingLine> lines;
    lines.reserve(keep.size());
    for (const auto& [n, _] : keep) {
        const auto& c = solver.conjugate(n);
        lines.push_back({n, -c.value, c.touch_x});
    }
    return MonomialEnvelope(phi.grid().domain(), phi.weight().label(), std::move(lines), cap,
                            smallest_at_end >= cap);
}

double WeightTable::value(std::size_t i) const { return std::exp(log_values_[i]); }

WeightTable associated_weight(const MonomialEnvelope& env, const EvaluationGrid& grid) {
    if (!(env.domain() == grid.domain())) throw std::invalid_argument("envelope and grid domains differ");
    WeightTable t(grid, env);
    t.origin_log_value_ = env.log_value(Radius::from_r(0.0));
    const auto& lines = env.lines();
    const auto& upper = env.upper_lines();
    const std::size_t n = grid.size();
    t.log_values_.resize(n);
    t.active_slopes_.resize(n);
    t.log_right_derivatives_.resize(n);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Radius& p = grid.point(i);
        const double s = p.log_r;
        while (j + 1 < upper.size() && lines[upper[j + 1]].at(s) >= lines[upper[j]].at(s)) ++j;
        double value = lines[upper[j]].at(s);
        std::int64_t slope = lines[upper[j]].slope;
        if (i + 1 == n) {
            // no right derivative is observable past the grid: take the
            // smallest slope attaining the maximum
            const double slack = prune_slack(value);
            for (const auto& l : lines) {
                if (l.at(s) >= value - slack) {
                    slope = l.slope;
                    break;
                }
            }
        }
        t.log_values_[i] = value;
        t.active_slopes_[i] = slope;
        t.log_right_derivatives_[i] =
            slope == 0 ? kNegInf : std::log(static_cast<double>(slope)) - s + value;
    }
    return t;
}

double envelope_right_derivative(const WeightTable& table, std::size_t i) {
    if (i >= table.size()) throw std::out_of_range("grid index out of range");
    if (!(table.grid().r(i) > 0.0)) throw std::domain_error("right derivative via slope formula undefined at r = 0");
    return std::exp(table.log_right_derivatives()[i]);
}

double envelope_right_derivative(const MonomialEnvelope& env, const Radius& radius) {
    if (!(radius.r > 0.0)) {
        throw std::domain_error("right derivative via slope formula undefined at r = 0");
    }
    std::int64_t n = env.active_slope(radius);
    if (n == 0) return 0.0;
    return std::exp(std::log(static_cast<double>(n)) - radius.log_r + env.log_value(radius));
}

SandwichResult sandwich_constants(const WeightSpec& spec, const WeightTable& table) {
    const auto& grid = table.grid();
    SandwichResult out;
    double worst_log = kNegInf;
    double worst_plain = kNegInf;
    auto visit = [&](const Radius& p, double log_hat) {
        double log_w = spec.log_value(p);
        double gap = log_w - log_hat;
        if (gap < -1e-9 * std::max(1.0, std::fabs(log_w))) {
            throw std::logic_error("envelope exceeds the weight at r=" + std::to_string(p.r));
        }
        worst_plain = std::max(worst_plain, gap);
        double crit = grid.domain().is_disk() ? gap : gap - std::log1p(p.r);
        if (crit > worst_log) {
            worst_log = crit;
            out.worst_radius = p.r;
        }
    };
    visit(Radius::from_r(0.0), table.origin_log_value());
    for (std::size_t i = 0; i < grid.size(); ++i) visit(grid.point(i), table.log_value(i));
    out.constant = std::exp(worst_log);
    out.plain_ratio = std::exp(worst_plain);
    return out;
}

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

namespace {

/// log of int_{e^sa}^{e^sb} e^a t^n dt.
double log_segment_integral(const SupportingLine& l, double sa, double sb) {
    const double k1 = static_cast<double>(l.slope) + 1.0;
    double tail = sa == kNegInf ? 0.0 : std::log(-std::expm1(k1 * (sa - sb)));
    return l.intercept - std::log(k1) + k1 * sb + tail;
}

}  // namespace

std::vector<double> log_integrated_envelope(const MonomialEnvelope& env, const std::vector<Radius>& radii) {
    const auto& lines = env.lines();
    const auto& upper = env.upper_lines();
    const auto& breaks = env.breakpoints();
    std::vector<double> out;
    out.reserve(radii.size());
    double done = kNegInf;  // integral up to the start of segment j
    std::size_t j = 0;
    double seg_start = kNegInf;
    double prev_s = kNegInf;
    for (const Radius& p : radii) {
        if (p.r <= 0.0) {
            out.push_back(kNegInf);
            continue;
        }
        const double s = p.log_r;
        if (s < prev_s) throw std::invalid_argument("radii must be sorted ascending");
        prev_s = s;
        while (j < breaks.size() && breaks[j] <= s) {
            done = log_add(done, log_segment_integral(lines[upper[j]], seg_start, breaks[j]));
            seg_start = breaks[j];
            ++j;
        }
        double partial = s > seg_start ? log_segment_integral(lines[upper[j]], seg_start, s) : kNegInf;
        out.push_back(log_add(done, partial));
    }
    return out;
}

double log_integrated_envelope(const MonomialEnvelope& env, const Radius& radius) {
    return log_integrated_envelope(env, std::vector<Radius>{radius}).front();
}

}  // namespace weightlab
