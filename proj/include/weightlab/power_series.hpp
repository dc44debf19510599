#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weightlab/domain.hpp"
#include "weightlab/envelope.hpp"
#include "weightlab/grid.hpp"
#include "weightlab/verdict.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// Nonzero coefficient c_k = exp(log_abs) * e^{i arg}. Stored in polar/log
/// form so envelope coefficients such as (e/k)^k survive for large k.
struct Term {
    std::uint64_t degree = 0;
    double log_abs = 0.0;
    double arg = 0.0;

    std::complex<double> value() const { return std::polar(std::exp(log_abs), arg); }
};

/// Finite power series, kept sparse. Zero coefficients are never stored,
/// so the last term is the true degree.
class PowerSeries {
public:
    PowerSeries() = default;

    static PowerSeries from_coefficients(const std::vector<std::complex<double>>& coeffs, std::string label = {});
    /// Terms in any order; repeated degrees are rejected.
    static PowerSeries from_terms(std::vector<Term> terms, std::string label = {});
    static PowerSeries monomial(std::uint64_t n, std::complex<double> c = 1.0, std::string label = {});

    bool is_zero() const { return terms_.empty(); }
    std::uint64_t degree() const { return terms_.empty() ? 0 : terms_.back().degree; }
    const std::vector<Term>& terms() const { return terms_; }
    const std::string& label() const { return label_; }
    PowerSeries with_label(std::string label) const;

    std::complex<double> coefficient(std::uint64_t k) const;
    /// c_0..c_N (underflows to 0 for tiny coefficients).
    std::vector<std::complex<double>> dense() const;
    bool nonnegative_real() const;

    std::complex<double> operator()(std::complex<double> z) const;
    /// log f(r) for r > 0 when all coefficients are non-negative reals.
    double log_value_at_positive(double r) const;

private:
    std::vector<Term> terms_;
    std::string label_;
};

/// d_k = (k+1) c_{k+1}.
PowerSeries apply_D(const PowerSeries& f);
/// j_{k+1} = c_k / (k+1), j_0 = 0.
PowerSeries apply_J(const PowerSeries& f);
/// Drops the coefficients below index n.
PowerSeries tail_series(const PowerSeries& g, std::uint64_t n);

/// m equispaced angles on the circle; m is a power of two.
struct CircleQuadrature {
    std::size_t m = 1024;

    /// Smallest power of two >= max(m_min, 4(N+1)).
    static CircleQuadrature for_series(const PowerSeries& f, std::size_t m_min = 1024);
    bool admits(const PowerSeries& f) const;
};

/// Largest quadrature size the lab will allocate.
inline constexpr std::size_t kMaxQuadrature = std::size_t{1} << 22;

/// log M_p(f, r). Exact shortcuts: p = 2 (coefficient formula), single
/// terms, and p = inf for non-negative coefficients; otherwise uniform
/// sampling, with the sampled maximum refined locally for p = inf.
/// Throws std::invalid_argument for r outside the domain or a quadrature
/// that violates m >= 4(N+1).
double log_mp_mean(const PowerSeries& f, Exponent p, double r, const CircleQuadrature& q,
                   Domain domain = Domain::plane());
double mp_mean(const PowerSeries& f, Exponent p, double r, const CircleQuadrature& q,
               Domain domain = Domain::plane());
/// log M_p(f, r) for several radii sharing one FFT plan.
std::vector<double> log_mp_profile(const PowerSeries& f, Exponent p, const std::vector<double>& radii,
                                   const CircleQuadrature& q);

/// Plain uniform sampling, no shortcuts (p = inf: sample maximum without
/// refinement).
double log_mp_mean_quadrature(const PowerSeries& f, Exponent p, double r, const CircleQuadrature& q);
/// (sum |c_k|^2 r^{2k})^{1/2}, in logs.
double log_m2_coefficients(const PowerSeries& f, double r);

struct HardyCheck {
    /// Most negative second difference of log M_p against log r (0 if none).
    double max_violation = 0.0;
    /// Most negative relative increment of M_p along the grid (0 if none).
    double monotonicity_violation = 0.0;
};

HardyCheck hardy_convexity_check(const PowerSeries& f, Exponent p, const EvaluationGrid& grid);

struct EnvelopeSeries {
    PowerSeries series;
    std::uint64_t n_max = 0;
    /// Envelope slopes above n_max are active at the reference radius.
    bool truncated = false;
    /// First dropped term over the retained sum at the reference radius.
    double truncation_bound = 0.0;
};

/// g(z) = sum 2 e^{a_k} z^k over the retained envelope slopes k <= n_max
/// (all of them by default).
EnvelopeSeries envelope_series(const MonomialEnvelope& env, std::optional<std::uint64_t> n_max = std::nullopt,
                               std::optional<double> reference_radius = std::nullopt);

/// z^0 .. z^n_max.
std::vector<PowerSeries> monomial_family(std::uint64_t n_max);
/// Complex Gaussian coefficients, degrees uniform in [1, max_degree].
std::vector<PowerSeries> random_polynomials(std::size_t count, std::uint64_t max_degree, std::uint64_t seed);

enum class Operator { D, J };
std::string to_string(Operator op);
PowerSeries apply(Operator op, const PowerSeries& f);

struct GrowthNorm {
    double log_norm = 0.0;
    double argmax_radius = 0.0;
};

/// sup over the origin and the grid of M_p(f, r) / w(r), in logs.
GrowthNorm growth_norm(const PowerSeries& f, const WeightSpec& w, Exponent p, const EvaluationGrid& grid);

struct OracleReport {
    Operator op = Operator::D;
    Exponent p;
    double lower_bound = 0.0;
    std::string argmax_sample;
    double argmax_radius = 0.0;
    std::vector<std::string> notes;
};

/// max over samples of ||T f||_{H_v^p} / ||f||_{H_w^p} with grid-sup
/// norms: a lower bound for the operator norm restricted to the grid.
OracleReport empirical_operator_norm(Operator op, const WeightSpec& w, const WeightSpec& v,
                                     const std::vector<PowerSeries>& samples, const EvaluationGrid& grid, Exponent p);

}  // namespace weightlab
