#include "weightlab/verdict.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace weightlab {

namespace {

constexpr std::pair<Criterion, std::string_view> kCriteria[] = {
    {Criterion::J_BOUNDED, "J_BOUNDED"},       {Criterion::J_COMPACT, "J_COMPACT"},
    {Criterion::D_NECESSARY, "D_NECESSARY"},   {Criterion::D_SUFF_DISK, "D_SUFF_DISK"},
    {Criterion::D_SUFF_PLANE, "D_SUFF_PLANE"}, {Criterion::D_SELF_PLANE, "D_SELF_PLANE"},
    {Criterion::D_DISK_TARGET, "D_DISK_TARGET"}, {Criterion::DOUBLING, "DOUBLING"},
};

constexpr std::pair<Status, std::string_view> kStatuses[] = {
    {Status::SATISFIED, "SATISFIED"},
    {Status::VIOLATED, "VIOLATED"},
    {Status::INCONCLUSIVE, "INCONCLUSIVE"},
};

}  // namespace

std::string to_string(Criterion c) {
    for (const auto& [k, name] : kCriteria) {
        if (k == c) return std::string(name);
    }
    return "UNKNOWN";
}

std::string to_string(Status s) {
    for (const auto& [k, name] : kStatuses) {
        if (k == s) return std::string(name);
    }
    return "UNKNOWN";
}

Criterion parse_criterion(std::string_view text) {
    for (const auto& [k, name] : kCriteria) {
        if (name == text) return k;
    }
    throw std::invalid_argument("unknown criterion '" + std::string(text) + "'");
}

Status parse_status(std::string_view text) {
    for (const auto& [k, name] : kStatuses) {
        if (name == text) return k;
    }
    throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

std::string Exponent::to_string() const {
    if (is_infinite()) return "inf";
    if (std::isnan(value)) return "any";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

Exponent Exponent::parse(std::string_view text) {
    if (text == "inf" || text == "infinity") return Exponent::infinity();
    if (text == "any") return Exponent::any();
    double v = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("exponent p must be a positive real or 'inf', got '" + std::string(text) + "'");
    }
    return Exponent{v};
}

}  // namespace weightlab
