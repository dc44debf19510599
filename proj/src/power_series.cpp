#include "weightlab/power_series.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace weightlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

double log_sum_exp(const std::vector<double>& xs) {
    double top = kNegInf;
    for (double x : xs) top = std::max(top, x);
    if (top == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - top);
    return top + std::log(acc);
}

// One FFTW plan reused across radii.
class Workspace {
public:
    explicit Workspace(std::size_t m) : m_(m) {
        in_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
        out_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
        if (!in_ || !out_) {
            release();
            throw std::bad_alloc();
        }
        plan_ = fftw_plan_dft_1d(static_cast<int>(m), in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
    ~Workspace() { release(); }

    std::size_t size() const { return m_; }

    // |f(r e^{2 pi i j/m})| * e^{-L} for j = 0..m-1, where L is returned.
    double sample(const PowerSeries& f, double s, std::vector<double>& moduli) {
        double top = kNegInf;
        for (const Term& t : f.terms()) top = std::max(top, t.log_abs + static_cast<double>(t.degree) * s);
        for (std::size_t j = 0; j < m_; ++j) in_[j][0] = in_[j][1] = 0.0;
        for (const Term& t : f.terms()) {
            double mag = std::exp(t.log_abs + static_cast<double>(t.degree) * s - top);
            in_[t.degree][0] = mag * std::cos(t.arg);
            in_[t.degree][1] = mag * std::sin(t.arg);
        }
        fftw_execute(plan_);
        moduli.resize(m_);
        for (std::size_t j = 0; j < m_; ++j) moduli[j] = std::hypot(out_[j][0], out_[j][1]);
        return top;
    }

private:
    void release() {
        if (plan_) fftw_destroy_plan(plan_);
        if (in_) fftw_free(in_);
        if (out_) fftw_free(out_);
        plan_ = nullptr;
        in_ = out_ = nullptr;
    }

    std::size_t m_;
    fftw_complex* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

void require_quadrature(const PowerSeries& f, const CircleQuadrature& q) {
    if (!is_power_of_two(q.m)) throw std::invalid_argument("quadrature size must be a power of two");
    if (!q.admits(f))
        throw std::invalid_argument("quadrature size " + std::to_string(q.m) + " below 4(N+1) for degree " +
                                    std::to_string(f.degree()));
}

double log_origin(const PowerSeries& f) {
    if (!f.is_zero() && f.terms().front().degree == 0) return f.terms().front().log_abs;
    return kNegInf;
}

// max over theta near theta0 of |sum b_k e^{ik theta}|, scaled by e^{-top}.
double refine_maximum(const PowerSeries& f, double s, double top, double theta0, double step) {
    auto neg_modulus = [&](double theta) {
        double re = 0.0, im = 0.0;
        for (const Term& t : f.terms()) {
            double mag = std::exp(t.log_abs + static_cast<double>(t.degree) * s - top);
            double phase = t.arg + static_cast<double>(t.degree) * theta;
            re += mag * std::cos(phase);
            im += mag * std::sin(phase);
        }
        return -std::hypot(re, im);
    };
    auto best = boost::math::tools::brent_find_minima(neg_modulus, theta0 - step, theta0 + step, 30);
    return -best.second;
}

double quadrature_mean(const PowerSeries& f, Exponent p, double s, Workspace& ws, bool refine) {
    std::vector<double> moduli;
    double top = ws.sample(f, s, moduli);
    std::size_t m = ws.size();
    if (p.is_infinite()) {
        auto it = std::max_element(moduli.begin(), moduli.end());
        double best = *it;
        if (refine) {
            double step = 2.0 * std::numbers::pi / static_cast<double>(m);
            double theta0 = step * static_cast<double>(it - moduli.begin());
            best = std::max(best, refine_maximum(f, s, top, theta0, step));
        }
        return best > 0.0 ? top + std::log(best) : kNegInf;
    }
    double acc = 0.0;
    for (double v : moduli) acc += std::pow(v, p.value);
    acc /= static_cast<double>(m);
    return acc > 0.0 ? top + std::log(acc) / p.value : kNegInf;
}

double log_mp_at(const PowerSeries& f, Exponent p, double r, const CircleQuadrature& q, Workspace* ws) {
    if (p.is_any() || !(p.value > 0.0)) throw std::invalid_argument("exponent must be in (0, inf]");
    if (f.is_zero()) return kNegInf;
    if (r == 0.0) return log_origin(f);
    double s = std::log(r);
    if (f.terms().size() == 1) return f.terms().front().log_abs + static_cast<double>(f.degree()) * s;
    if (p.value == 2.0) return log_m2_coefficients(f, r);
    if (p.is_infinite() && f.nonnegative_real()) return f.log_value_at_positive(r);
    require_quadrature(f, q);
    if (ws) return quadrature_mean(f, p, s, *ws, true);
    Workspace local(q.m);
    return quadrature_mean(f, p, s, local, true);
}

void check_radius(double r, Domain domain) {
    if (!(r >= 0.0) || !(r < domain.rmax()) || !std::isfinite(r))
        throw std::invalid_argument("radius " + std::to_string(r) + " outside the " + domain.name());
}

// Oversized series fail only when sampling is needed.
CircleQuadrature capped_quadrature(const PowerSeries& f) {
    if (4 * (f.degree() + 1) > kMaxQuadrature) return {kMaxQuadrature};
    return CircleQuadrature::for_series(f);
}

}  // namespace

PowerSeries PowerSeries::from_coefficients(const std::vector<std::complex<double>>& coeffs, std::string label) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const auto& c = coeffs[k];
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::invalid_argument("non-finite coefficient at index " + std::to_string(k));
        if (c == std::complex<double>(0.0, 0.0)) continue;
        terms.push_back({k, std::log(std::abs(c)), std::arg(c)});
    }
    PowerSeries out;
    out.terms_ = std::move(terms);
    out.label_ = std::move(label);
    return out;
}

PowerSeries PowerSeries::from_terms(std::vector<Term> terms, std::string label) {
    std::erase_if(terms, [](const Term& t) { return t.log_abs == kNegInf; });
    for (const Term& t : terms)
        if (std::isnan(t.log_abs) || t.log_abs == std::numeric_limits<double>::infinity() || !std::isfinite(t.arg))
            throw std::invalid_argument("non-finite term at degree " + std::to_string(t.degree));
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.degree < b.degree; });
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (terms[i].degree == terms[i - 1].degree)
            throw std::invalid_argument("repeated degree " + std::to_string(terms[i].degree));
    PowerSeries out;
    out.terms_ = std::move(terms);
    out.label_ = std::move(label);
    return out;
}

PowerSeries PowerSeries::monomial(std::uint64_t n, std::complex<double> c, std::string label) {
    if (label.empty()) label = "z^" + std::to_string(n);
    if (c == std::complex<double>(0.0, 0.0)) return from_terms({}, std::move(label));
    return from_terms({{n, std::log(std::abs(c)), std::arg(c)}}, std::move(label));
}

PowerSeries PowerSeries::with_label(std::string label) const {
    PowerSeries out = *this;
    out.label_ = std::move(label);
    return out;
}

std::complex<double> PowerSeries::coefficient(std::uint64_t k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, std::uint64_t d) { return t.degree < d; });
    if (it == terms_.end() || it->degree != k) return 0.0;
    return it->value();
}

std::vector<std::complex<double>> PowerSeries::dense() const {
    std::vector<std::complex<double>> out(is_zero() ? 0 : degree() + 1);
    for (const Term& t : terms_) out[t.degree] = t.value();
    return out;
}

bool PowerSeries::nonnegative_real() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.arg == 0.0; });
}

std::complex<double> PowerSeries::operator()(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    if (z == std::complex<double>(0.0, 0.0)) return coefficient(0);
    double log_mod = std::log(std::abs(z));
    double phase = std::arg(z);
    for (const Term& t : terms_) {
        double k = static_cast<double>(t.degree);
        acc += std::polar(std::exp(t.log_abs + k * log_mod), t.arg + k * phase);
    }
    return acc;
}

double PowerSeries::log_value_at_positive(double r) const {
    if (!nonnegative_real()) throw std::invalid_argument("series has non-positive coefficients");
    if (!(r >= 0.0)) throw std::invalid_argument("negative radius");
    if (r == 0.0) return log_origin(*this);
    double s = std::log(r);
    std::vector<double> logs;
    logs.reserve(terms_.size());
    for (const Term& t : terms_) logs.push_back(t.log_abs + static_cast<double>(t.degree) * s);
    return log_sum_exp(logs);
}

PowerSeries apply_D(const PowerSeries& f) {
    std::vector<Term> out;
    for (const Term& t : f.terms())
        if (t.degree > 0) out.push_back({t.degree - 1, t.log_abs + std::log(static_cast<double>(t.degree)), t.arg});
    return PowerSeries::from_terms(std::move(out), "D(" + f.label() + ")");
}

PowerSeries apply_J(const PowerSeries& f) {
    std::vector<Term> out;
    for (const Term& t : f.terms())
        out.push_back({t.degree + 1, t.log_abs - std::log(static_cast<double>(t.degree + 1)), t.arg});
    return PowerSeries::from_terms(std::move(out), "J(" + f.label() + ")");
}

PowerSeries tail_series(const PowerSeries& g, std::uint64_t n) {
    std::vector<Term> out;
    for (const Term& t : g.terms())
        if (t.degree >= n) out.push_back(t);
    return PowerSeries::from_terms(std::move(out), g.label() + "_" + std::to_string(n));
}

CircleQuadrature CircleQuadrature::for_series(const PowerSeries& f, std::size_t m_min) {
    std::uint64_t need = 4 * (f.degree() + 1);
    if (need > kMaxQuadrature) throw std::invalid_argument("degree " + std::to_string(f.degree()) + " too large for quadrature");
    std::size_t m = 1;
    while (m < std::max<std::uint64_t>(need, m_min)) m <<= 1;
    return {m};
}

bool CircleQuadrature::admits(const PowerSeries& f) const {
    return is_power_of_two(m) && static_cast<std::uint64_t>(m) >= 4 * (f.degree() + 1);
}

double log_mp_mean(const PowerSeries& f, Exponent p, double r, const CircleQuadrature& q, Domain domain) {
    check_radius(r, domain);
    return log_mp_at(f, p, r, q, nullptr);
}

double mp_mean(const PowerSeries& f, Exponent p, double r, const CircleQuadrature& q, Domain domain) {
    return std::exp(log_mp_mean(f, p, r, q, domain));
}

std::vector<double> log_mp_profile(const PowerSeries& f, Exponent p, const std::vector<double>& radii,
                                   const CircleQuadrature& q) {
    std::vector<double> out;
    out.reserve(radii.size());
    std::unique_ptr<Workspace> ws;
    for (double r : radii) {
        check_radius(r, Domain::plane());
        bool needs_fft = r > 0.0 && f.terms().size() > 1 && p.value != 2.0 &&
                         !(p.is_infinite() && f.nonnegative_real());
        if (needs_fft && !ws) {
            require_quadrature(f, q);
            ws = std::make_unique<Workspace>(q.m);
        }
        out.push_back(log_mp_at(f, p, r, q, ws.get()));
    }
    return out;
}

double log_mp_mean_quadrature(const PowerSeries& f, Exponent p, double r, const CircleQuadrature& q) {
    if (p.is_any() || !(p.value > 0.0)) throw std::invalid_argument("exponent must be in (0, inf]");
    check_radius(r, Domain::plane());
    require_quadrature(f, q);
    if (f.is_zero()) return kNegInf;
    if (r == 0.0) return log_origin(f);
    Workspace ws(q.m);
    return quadrature_mean(f, p, std::log(r), ws, false);
}

double log_m2_coefficients(const PowerSeries& f, double r) {
    if (f.is_zero()) return kNegInf;
    if (r == 0.0) return log_origin(f);
    double s = std::log(r);
    std::vector<double> logs;
    logs.reserve(f.terms().size());
    for (const Term& t : f.terms()) logs.push_back(2.0 * (t.log_abs + static_cast<double>(t.degree) * s));
    return 0.5 * log_sum_exp(logs);
}

HardyCheck hardy_convexity_check(const PowerSeries& f, Exponent p, const EvaluationGrid& grid) {
    if (f.is_zero()) throw std::invalid_argument("zero series");
    std::vector<double> radii, s;
    for (const Radius& pt : grid.points()) {
        radii.push_back(pt.r);
        s.push_back(pt.log_r);
    }
    auto y = log_mp_profile(f, p, radii, capped_quadrature(f));
    HardyCheck out;
    for (std::size_t i = 1; i < y.size(); ++i) out.monotonicity_violation = std::min(out.monotonicity_violation, y[i] - y[i - 1]);
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        double h0 = s[i] - s[i - 1], h1 = s[i + 1] - s[i];
        double d = 2.0 * (h0 * y[i + 1] - (h0 + h1) * y[i] + h1 * y[i - 1]) / (h0 + h1);
        out.max_violation = std::min(out.max_violation, d);
    }
    return out;
}

EnvelopeSeries envelope_series(const MonomialEnvelope& env, std::optional<std::uint64_t> n_max,
                               std::optional<double> reference_radius) {
    EnvelopeSeries out;
    out.n_max = n_max.value_or(static_cast<std::uint64_t>(env.max_slope()));
    std::vector<Term> terms;
    std::optional<SupportingLine> first_dropped;
    for (const SupportingLine& line : env.lines()) {
        auto k = static_cast<std::uint64_t>(line.slope);
        if (k <= out.n_max)
            terms.push_back({k, std::numbers::ln2 + line.intercept, 0.0});
        else if (!first_dropped)
            first_dropped = line;
    }
    out.series = PowerSeries::from_terms(std::move(terms), "g");
    if (reference_radius) {
        Radius ref = Radius::from_r(*reference_radius);
        out.truncated = static_cast<std::uint64_t>(env.active_slope(ref)) > out.n_max;
        if (first_dropped && *reference_radius > 0.0)
            out.truncation_bound =
                std::exp(std::numbers::ln2 + first_dropped->at(ref.log_r) - out.series.log_value_at_positive(ref.r));
    }
    return out;
}

std::vector<PowerSeries> monomial_family(std::uint64_t n_max) {
    std::vector<PowerSeries> out;
    for (std::uint64_t n = 0; n <= n_max; ++n) out.push_back(PowerSeries::monomial(n));
    return out;
}

std::vector<PowerSeries> random_polynomials(std::size_t count, std::uint64_t max_degree, std::uint64_t seed) {
    if (max_degree == 0) throw std::invalid_argument("max degree must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> degree(1, max_degree);
    std::normal_distribution<double> gauss;
    std::vector<PowerSeries> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<std::complex<double>> c(degree(rng) + 1);
        for (auto& ck : c) {
            double re = gauss(rng);
            double im = gauss(rng);
            ck = {re, im};
        }
        out.push_back(PowerSeries::from_coefficients(c, "random[" + std::to_string(i) + "]"));
    }
    return out;
}

std::string to_string(Operator op) { return op == Operator::D ? "D" : "J"; }

PowerSeries apply(Operator op, const PowerSeries& f) { return op == Operator::D ? apply_D(f) : apply_J(f); }

GrowthNorm growth_norm(const PowerSeries& f, const WeightSpec& w, Exponent p, const EvaluationGrid& grid) {
    if (!(w.domain() == grid.domain())) throw std::invalid_argument("grid mismatch");
    GrowthNorm out{kNegInf, 0.0};
    if (f.is_zero()) return out;
    std::vector<double> radii{0.0};
    for (const Radius& pt : grid.points()) radii.push_back(pt.r);
    auto logs = log_mp_profile(f, p, radii, capped_quadrature(f));
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (logs[i] == kNegInf) continue;
        double lw;
        try {
            lw = i == 0 ? w.log_value(Radius::from_r(0.0)) : w.log_value(grid.point(i - 1));
        } catch (const EvaluationError&) {
            continue;
        }
        double v = logs[i] - lw;
        if (v > out.log_norm) out = {v, radii[i]};
    }
    return out;
}

OracleReport empirical_operator_norm(Operator op, const WeightSpec& w, const WeightSpec& v,
                                     const std::vector<PowerSeries>& samples, const EvaluationGrid& grid, Exponent p) {
    OracleReport out;
    out.op = op;
    out.p = p;
    double best = kNegInf;
    bool any = false;
    for (const PowerSeries& f : samples) {
        try {
            GrowthNorm nf = growth_norm(f, w, p, grid);
            if (nf.log_norm == kNegInf) continue;
            GrowthNorm nt = growth_norm(apply(op, f), v, p, grid);
            double ratio = nt.log_norm - nf.log_norm;
            if (!any || ratio > best) {
                best = ratio;
                out.argmax_sample = f.label();
                out.argmax_radius = nt.argmax_radius;
            }
            any = true;
        } catch (const std::invalid_argument& e) {
            out.notes.push_back("skipped " + f.label() + ": " + e.what());
        }
    }
    if (!any) throw std::invalid_argument("no usable samples");
    out.lower_bound = std::exp(best);
    return out;
}

}  // namespace weightlab
