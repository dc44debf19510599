#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "weightlab/domain.hpp"

namespace weightlab {

enum class Criterion { J_BOUNDED, J_COMPACT, D_NECESSARY, D_SUFF_DISK, D_SUFF_PLANE, D_SELF_PLANE, D_DISK_TARGET, DOUBLING };
enum class Status { SATISFIED, VIOLATED, INCONCLUSIVE };

std::string to_string(Criterion c);
std::string to_string(Status s);
Criterion parse_criterion(std::string_view text);
Status parse_status(std::string_view text);

/// Exponent p in (0, inf].
struct Exponent {
    double value = std::numeric_limits<double>::infinity();

    static Exponent infinity() { return {}; }
    /// Marks verdicts that hold for every 0 < p < inf.
    static Exponent any() { return {std::numeric_limits<double>::quiet_NaN()}; }
    bool is_any() const { return std::isnan(value); }
    bool is_infinite() const { return std::isinf(value); }
    std::string to_string() const;
    /// Accepts a positive real, "inf" or "any".
    static Exponent parse(std::string_view text);
    friend bool operator==(Exponent a, Exponent b) { return a.value == b.value || (a.is_any() && b.is_any()); }
};

struct GridInfo {
    Domain domain = Domain::plane();
    std::size_t n_points = 0;
    double extent = 0.0;
    friend bool operator==(const GridInfo& a, const GridInfo& b) {
        return a.domain == b.domain && a.n_points == b.n_points && a.extent == b.extent;
    }
};

/// One row of a criterion ratio scan, in logs.
struct RatioSample {
    double r = 0.0;
    double log_numerator = 0.0;
    double log_denominator = 0.0;
    double log_ratio() const { return log_numerator - log_denominator; }
};

/// Tail classification thresholds.
struct VerdictThresholds {
    double growth_slope = 0.05;
    double compact_final = 1e-6;
    double noncompact_final = 1e-3;
};

struct Verdict {
    Criterion criterion = Criterion::J_BOUNDED;
    Status status = Status::INCONCLUSIVE;
    /// sup of the criterion ratio over the evaluated range.
    double constant = std::numeric_limits<double>::quiet_NaN();
    /// Least-squares slope of the log ratio over the last quarter.
    double tail_slope = 0.0;
    Exponent p;
    GridInfo grid;
    std::vector<RatioSample> evidence;
    /// Extra named quantities (second constants, final ratios, flags).
    std::map<std::string, double> auxiliary;
    std::vector<std::string> notes;
    std::string evidence_csv;
};

}  // namespace weightlab
