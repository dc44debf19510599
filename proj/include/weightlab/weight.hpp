#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weightlab/domain.hpp"
#include "weightlab/expression.hpp"
#include "weightlab/grid.hpp"

namespace weightlab {

/// A radial weight: a formula in r on the disk or the plane.
class WeightSpec {
public:
    WeightSpec(Domain domain, Expr::Ptr expr, std::string label);

    /// Parses `text` and labels the weight with it.
    static WeightSpec parse(Domain domain, std::string_view text);

    Domain domain() const { return domain_; }
    const Expr::Ptr& expr() const { return expr_; }
    const std::string& label() const { return label_; }

    /// log w at the radius; throws EvaluationError if w is not finite and
    /// positive there.
    double log_value(const Radius& radius) const;
    double log_value(double r) const { return log_value(Radius::from_r(r)); }
    double value(double r) const;

private:
    Domain domain_;
    Expr::Ptr expr_;
    std::string label_;
};

struct ValidationOptions {
    double monotone_rel_tol = 1e-12;
    /// w(last) / w(first) must exceed this factor.
    double unbounded_factor = 10.0;
    /// Plane only: slope of log log w against log log r over the tail.
    double superpoly_min_slope = 1.05;
};

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::string detail;
    std::optional<double> witness_radius;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool ok() const;
    const ValidationCheck* first_failure() const;
};

ValidationReport validate_weight(const WeightSpec& spec, const EvaluationGrid& grid,
                                 const ValidationOptions& options = {});

/// Samples of Phi = log w on the grid, indexed by the grid's transform
/// coordinate x and by s = log r (the coordinate in which log-convexity is
/// defined). Samples whose evaluation overflows are dropped and reported.
class LogTransform {
public:
    struct Sample {
        double x;
        double s;  // log r
        double phi;
    };

    const WeightSpec& weight() const { return weight_; }
    const EvaluationGrid& grid() const { return grid_; }
    const std::vector<Sample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    /// log w(0).
    double origin_phi() const { return origin_phi_; }
    bool convex() const { return convex_; }
    /// Most negative normalised slope increment, 0 if none.
    double worst_convexity_defect() const { return worst_defect_; }
    const std::vector<std::string>& dropped() const { return dropped_; }

    /// Phi at an off-grid transform coordinate.
    double phi_at(double x) const { return weight_.log_value(grid_.radius_at(x)); }

private:
    friend LogTransform log_transform(const WeightSpec& spec, const EvaluationGrid& grid);
    LogTransform(WeightSpec weight, EvaluationGrid grid) : weight_(std::move(weight)), grid_(std::move(grid)) {}

    WeightSpec weight_;
    EvaluationGrid grid_;
    std::vector<Sample> samples_;
    double origin_phi_ = 0.0;
    bool convex_ = false;
    double worst_defect_ = 0.0;
    std::vector<std::string> dropped_;
};

LogTransform log_transform(const WeightSpec& spec, const EvaluationGrid& grid);

/// Least-squares slope of ys against xs.
double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace weightlab
