#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace weightlab {

enum class DomainKind { Disk, Plane };

/// The unit disk or the complex plane; rmax follows from the kind.
class Domain {
public:
    constexpr explicit Domain(DomainKind kind) : kind_(kind) {}

    static constexpr Domain disk() { return Domain(DomainKind::Disk); }
    static constexpr Domain plane() { return Domain(DomainKind::Plane); }

    constexpr DomainKind kind() const { return kind_; }
    constexpr bool is_disk() const { return kind_ == DomainKind::Disk; }
    constexpr bool is_plane() const { return kind_ == DomainKind::Plane; }

    double rmax() const {
        return is_disk() ? 1.0 : std::numeric_limits<double>::infinity();
    }

    std::string name() const { return is_disk() ? "disk" : "plane"; }

    friend constexpr bool operator==(Domain a, Domain b) { return a.kind_ == b.kind_; }

private:
    DomainKind kind_;
};

/// Parses "disk" or "plane"; throws std::invalid_argument otherwise.
Domain parse_domain(std::string_view text);

/// A radius carried with its logarithm and its distance to 1.
struct Radius {
    double r = 0.0;
    double log_r = -std::numeric_limits<double>::infinity();
    double complement = 1.0;  // 1 - r

    static Radius from_r(double r) {
        return {r, r > 0.0 ? std::log(r) : -std::numeric_limits<double>::infinity(), 1.0 - r};
    }
    /// r = e^s.
    static Radius from_log(double s) { return {std::exp(s), s, -std::expm1(s)}; }
    /// r = 1 - c with c known exactly.
    static Radius from_complement(double c) {
        double r = 1.0 - c;
        return {r, r > 0.0 ? std::log1p(-c) : -std::numeric_limits<double>::infinity(), c};
    }
};

}  // namespace weightlab
