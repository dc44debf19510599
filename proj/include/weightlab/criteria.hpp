#pragma once

#include <optional>

#include "weightlab/envelope.hpp"
#include "weightlab/grid.hpp"
#include "weightlab/verdict.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// Classifies a log-ratio scan by its sup and the regression slope of the
/// last quarter: slope >= growth_slope is VIOLATED, a finite sup otherwise
/// SATISFIED, anything non-finite INCONCLUSIVE.
void classify_tail(Verdict& verdict, const std::vector<double>& xs, const VerdictThresholds& thresholds = {});

/// int_0^r w_hat(t) dt <= C v(r), with w_hat the envelope in `w_table`.
Verdict check_integration_bounded(const WeightTable& w_table, const WeightSpec& v, const EvaluationGrid& grid,
                                  const VerdictThresholds& thresholds = {});

/// lim (1/v(r)) int_0^r w_hat = 0 on the plane.
Verdict check_integration_compact(const WeightTable& w_table, const WeightSpec& v, const EvaluationGrid& grid,
                                  const VerdictThresholds& thresholds = {});

/// Dyadic ratios w(1-2^{-n-1}) / w(1-2^{-n}) for n = 0..n_max.
Verdict doubling_constant(const WeightSpec& w, int n_max = 32, const VerdictThresholds& thresholds = {});

struct NecessaryOptions {
    /// Measured log-convexity; a disk VIOLATED verdict is downgraded when
    /// either weight is known not to be log-convex.
    std::optional<bool> w_log_convex;
    std::optional<bool> v_log_convex;
    VerdictThresholds thresholds;
};

/// w_hat'(r) <= C v_hat(r); only meaningful for p >= 1.
Verdict check_differentiation_necessary(const WeightTable& w_table, const WeightTable& v_table, Exponent p,
                                        const NecessaryOptions& options = {});

/// w((1+r)/2) <= C (1-r) v(r) on the disk.
Verdict check_differentiation_sufficient_disk(const WeightSpec& w, const WeightSpec& v, const EvaluationGrid& grid,
                                              const VerdictThresholds& thresholds = {});

/// w(1+r) <= C v(r) on the plane.
Verdict check_differentiation_sufficient_plane(const WeightSpec& w, const WeightSpec& v, const EvaluationGrid& grid,
                                               const VerdictThresholds& thresholds = {});

/// D on H_w^p(C): (i) log w_hat(r) <= C r and (ii) w_hat'(r) <= C w(r) for r >= 1.
/// `constant` is the (i) constant; auxiliary holds constant_ii,
/// tail_slope_ii and implication_ok ((i) satisfied implies (ii) satisfied).
Verdict check_D_self_plane(const WeightTable& w_table, const WeightSpec& w, Exponent p,
                           const VerdictThresholds& thresholds = {});

/// D: H_w^p(D) -> H_v^p(D) with v = w/(1-r), decided through doubling.
Verdict check_D_disk_weighted_target(const WeightSpec& w, Exponent p, int n_max, bool w_log_convex,
                                     const VerdictThresholds& thresholds = {});
/// Same, measuring log-convexity of w on the default disk grid.
Verdict check_D_disk_weighted_target(const WeightSpec& w, Exponent p, int n_max = 32);

/// The weight w(r)/(1-r).
WeightSpec weighted_target(const WeightSpec& w);

}  // namespace weightlab
