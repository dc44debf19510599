#pragma once

#include <cstddef>
#include <vector>

#include "weightlab/domain.hpp"

namespace weightlab {

/// Radius grid that is uniform in the transform coordinate x: x = log r on
/// the plane, x = log 1/(1-r) on the disk. The origin is kept apart from
/// the sampled points.
class EvaluationGrid {
public:
    static constexpr std::size_t kMinPoints = 16;

    /// Plane: extent is the largest radius (> 1); xs uniform on
    /// [-log extent, log extent]. Disk: extent is the largest value of
    /// log 1/(1-r); xs = extent * (i+1)/n_points.
    static EvaluationGrid build(Domain domain, std::size_t n_points, double extent);

    Domain domain() const { return domain_; }
    std::size_t size() const { return points_.size(); }
    double extent() const { return extent_; }
    bool includes_origin() const { return true; }

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<Radius>& points() const { return points_; }
    const Radius& point(std::size_t i) const { return points_[i]; }
    double r(std::size_t i) const { return points_[i].r; }
    double x(std::size_t i) const { return xs_[i]; }

    /// Radius at transform coordinate x (off-grid allowed).
    Radius radius_at(double x) const { return radius_at(domain_, x); }
    static Radius radius_at(Domain domain, double x);

    /// First index of the last quarter of the points.
    std::size_t tail_begin() const { return size() - size() / 4; }

    friend bool operator==(const EvaluationGrid& a, const EvaluationGrid& b) {
        return a.domain_ == b.domain_ && a.xs_ == b.xs_;
    }

private:
    EvaluationGrid(Domain domain, double extent, std::vector<double> xs);

    Domain domain_;
    double extent_;
    std::vector<double> xs_;
    std::vector<Radius> points_;
};

/// Default analysis grids: plane r <= e^8, disk r <= 1 - 1e-8, 512 points.
EvaluationGrid default_grid(Domain domain, std::size_t n_points = 512);
double default_extent(Domain domain);

}  // namespace weightlab
