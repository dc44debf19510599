#include "weightlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace weightlab {

Domain parse_domain(std::string_view text) {
    if (text == "disk") return Domain::disk();
    if (text == "plane") return Domain::plane();
    throw std::invalid_argument("unknown domain '" + std::string(text) + "' (expected disk or plane)");
}

Radius EvaluationGrid::radius_at(Domain domain, double x) {
    if (domain.is_plane()) return Radius::from_log(x);
    return Radius::from_complement(std::exp(-x));
}

EvaluationGrid::EvaluationGrid(Domain domain, double extent, std::vector<double> xs)
    : domain_(domain), extent_(extent), xs_(std::move(xs)) {
    points_.reserve(xs_.size());
    for (double x : xs_) points_.push_back(radius_at(x));
}

EvaluationGrid EvaluationGrid::build(Domain domain, std::size_t n_points, double extent) {
    if (n_points < kMinPoints) {
        throw std::invalid_argument("too few grid points: " + std::to_string(n_points) + " < " +
                                    std::to_string(kMinPoints));
    }
    if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("grid extent must be positive");
    std::vector<double> xs(n_points);
    if (domain.is_plane()) {
        if (!(extent > 1.0)) throw std::invalid_argument("plane grid extent (max radius) must exceed 1");
        double half = std::log(extent);
        double step = 2.0 * half / static_cast<double>(n_points - 1);
        for (std::size_t i = 0; i < n_points; ++i) xs[i] = -half + step * static_cast<double>(i);
        xs.back() = half;
    } else {
        if (extent > 36.0) throw std::invalid_argument("disk grid extent must keep r < 1 in double precision (extent <= 36)");
        for (std::size_t i = 0; i < n_points; ++i) {
            xs[i] = extent * static_cast<double>(i + 1) / static_cast<double>(n_points);
        }
    }
    return EvaluationGrid(domain, extent, std::move(xs));
}

double default_extent(Domain domain) { return domain.is_plane() ? std::exp(8.0) : 18.42; }

EvaluationGrid default_grid(Domain domain, std::size_t n_points) {
    return EvaluationGrid::build(domain, n_points, default_extent(domain));
}

}  // namespace weightlab
