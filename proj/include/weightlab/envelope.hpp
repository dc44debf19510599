#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weightlab/grid.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// Value of the integer-slope conjugate sup_x (n*s(x) - Phi(x)) and where it
/// is attained (transform coordinate; none for the origin sample).
struct Conjugate {
    double value = 0.0;
    std::optional<double> touch_x;
};

/// Integer-slope Legendre-Fenchel conjugate of the sampled log transform,
/// refined by a ternary search between the grid neighbours of the maximiser.
Conjugate legendre_conjugate(const LogTransform& phi, std::int64_t n);

/// Supporting line a + n*log r of log w, i.e. the monomial e^a r^n below w.
struct SupportingLine {
    std::int64_t slope = 0;
    double intercept = 0.0;  // a_n = -Phi*(n)
    std::optional<double> touch_x;

    double at(double s) const { return intercept + static_cast<double>(slope) * s; }
};

/// Upper envelope G(s) = max_n (a_n + n s) of monomials lying below a weight.
/// It does not depend on p: the integral mean of c z^n is |c| r^n for every p.
class MonomialEnvelope {
public:
    MonomialEnvelope(Domain domain, std::string source, std::vector<SupportingLine> lines, std::int64_t n_max,
                     bool truncated);

    Domain domain() const { return domain_; }
    const std::string& source() const { return source_; }
    /// Retained lines, slopes strictly increasing.
    const std::vector<SupportingLine>& lines() const { return lines_; }
    std::int64_t n_max() const { return n_max_; }
    bool truncated() const { return truncated_; }
    std::int64_t max_slope() const { return lines_.back().slope; }

    /// Intercept of the retained line with this slope, if any.
    std::optional<double> intercept(std::int64_t slope) const;

    /// G(log r) = log of the envelope at r (r = 0 gives a_0).
    double log_value(const Radius& radius) const;
    /// Slope of the maximising line; the larger one at a breakpoint.
    std::int64_t active_slope(const Radius& radius) const;

    /// Lines that are maximal somewhere, in slope order, with breakpoints:
    /// upper_lines()[j] is maximal for s in [breakpoints()[j-1], breakpoints()[j]].
    const std::vector<std::size_t>& upper_lines() const { return upper_; }
    const std::vector<double>& breakpoints() const { return breaks_; }

private:
    std::size_t upper_index_at(double s) const;

    Domain domain_;
    std::string source_;
    std::vector<SupportingLine> lines_;
    std::int64_t n_max_;
    bool truncated_;
    std::vector<std::size_t> upper_;
    std::vector<double> breaks_;
};

/// Supporting lines of log w at every integer slope up to n_max, keeping
/// only lines within 1e-9 of the envelope at some grid point. Without
/// n_max the right-end slope plus 8 is used.
MonomialEnvelope monomial_coefficients(const LogTransform& phi, std::optional<std::int64_t> n_max = std::nullopt);

/// Envelope values on a grid (logs, to survive weights like exp(1/(1-r))).
class WeightTable {
public:
    const EvaluationGrid& grid() const { return grid_; }
    const MonomialEnvelope& envelope() const { return envelope_; }
    double origin_log_value() const { return origin_log_value_; }
    const std::vector<double>& log_values() const { return log_values_; }
    const std::vector<std::int64_t>& active_slopes() const { return active_slopes_; }
    /// log of (n(r)/r) * w_hat(r); -inf where the active slope is 0.
    const std::vector<double>& log_right_derivatives() const { return log_right_derivatives_; }

    double value(std::size_t i) const;
    double log_value(std::size_t i) const { return log_values_[i]; }
    std::int64_t active_slope(std::size_t i) const { return active_slopes_[i]; }
    std::size_t size() const { return log_values_.size(); }

private:
    friend WeightTable associated_weight(const MonomialEnvelope& env, const EvaluationGrid& grid);
    WeightTable(EvaluationGrid grid, MonomialEnvelope env) : grid_(std::move(grid)), envelope_(std::move(env)) {}

    EvaluationGrid grid_;
    MonomialEnvelope envelope_;
    double origin_log_value_ = 0.0;
    std::vector<double> log_values_;
    std::vector<std::int64_t> active_slopes_;
    std::vector<double> log_right_derivatives_;
};

WeightTable associated_weight(const MonomialEnvelope& env, const EvaluationGrid& grid);

/// (n(r_i)/r_i) * w_hat(r_i), exact for the piecewise monomial envelope.
double envelope_right_derivative(const WeightTable& table, std::size_t i);
/// Same at an arbitrary radius; throws std::domain_error at r = 0.
double envelope_right_derivative(const MonomialEnvelope& env, const Radius& radius);

struct SandwichResult {
    /// Disk: sup w/w_hat. Plane: sup w/((r+1) w_hat).
    double constant = 0.0;
    double worst_radius = 0.0;
    /// sup w/w_hat on either domain.
    double plain_ratio = 0.0;
};

/// Throws std::logic_error if the envelope exceeds the weight anywhere on
/// the grid (beyond 1e-9 relative).
SandwichResult sandwich_constants(const WeightSpec& spec, const WeightTable& table);

/// log of the integral of the envelope from 0 to each radius, by exact
/// monomial antiderivatives over the envelope's segments. Radii must be
/// sorted ascending.
std::vector<double> log_integrated_envelope(const MonomialEnvelope& env, const std::vector<Radius>& radii);
double log_integrated_envelope(const MonomialEnvelope& env, const Radius& radius);

/// log(e^a + e^b).
double log_add(double a, double b);

}  // namespace weightlab
