#include "weightlab/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

namespace weightlab {

using nlohmann::json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_short(double x) {
    if (!std::isfinite(x)) return format_number(x);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

json number_to_json(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

double number_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw std::invalid_argument("expected a number, got " + j.dump());
}

json verdict_to_json(const Verdict& v) {
    json aux = json::object();
    for (const auto& [k, x] : v.auxiliary) aux[k] = number_to_json(x);
    return json{
        {"criterion", to_string(v.criterion)},
        {"status", to_string(v.status)},
        {"constant", number_to_json(v.constant)},
        {"tail_slope", number_to_json(v.tail_slope)},
        {"p", v.p.to_string()},
        {"grid", {{"domain", v.grid.domain.name()}, {"n_points", v.grid.n_points}, {"extent", number_to_json(v.grid.extent)}}},
        {"evidence_csv", v.evidence_csv},
        {"auxiliary", aux},
        {"notes", v.notes},
    };
}

Verdict verdict_from_json(const json& j) {
    Verdict v;
    v.criterion = parse_criterion(j.at("criterion").get<std::string>());
    v.status = parse_status(j.at("status").get<std::string>());
    v.constant = number_from_json(j.at("constant"));
    v.tail_slope = number_from_json(j.at("tail_slope"));
    v.p = Exponent::parse(j.at("p").get<std::string>());
    const auto& g = j.at("grid");
    v.grid.domain = parse_domain(g.at("domain").get<std::string>());
    v.grid.n_points = g.at("n_points").get<std::size_t>();
    v.grid.extent = number_from_json(g.at("extent"));
    v.evidence_csv = j.value("evidence_csv", "");
    if (j.contains("auxiliary"))
        for (const auto& [k, x] : j.at("auxiliary").items()) v.auxiliary[k] = number_from_json(x);
    if (j.contains("notes")) v.notes = j.at("notes").get<std::vector<std::string>>();
    return v;
}

bool same_report(const Verdict& a, const Verdict& b) {
    return verdict_to_json(a) == verdict_to_json(b);
}

json oracle_to_json(const OracleReport& r) {
    return json{
        {"op", to_string(r.op)},
        {"p", r.p.to_string()},
        {"lower_bound", number_to_json(r.lower_bound)},
        {"argmax_sample", r.argmax_sample},
        {"argmax_radius", number_to_json(r.argmax_radius)},
        {"notes", r.notes},
    };
}

OracleReport oracle_from_json(const json& j) {
    OracleReport r;
    auto op = j.at("op").get<std::string>();
    if (op == "D")
        r.op = Operator::D;
    else if (op == "J")
        r.op = Operator::J;
    else
        throw std::invalid_argument("unknown operator '" + op + "'");
    r.p = Exponent::parse(j.at("p").get<std::string>());
    r.lower_bound = number_from_json(j.at("lower_bound"));
    r.argmax_sample = j.at("argmax_sample").get<std::string>();
    r.argmax_radius = number_from_json(j.at("argmax_radius"));
    if (j.contains("notes")) r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

std::string evidence_csv(const Verdict& v) {
    std::string out = "r,log_numerator,log_denominator,log_ratio\n";
    for (const auto& row : v.evidence)
        out += format_number(row.r) + "," + format_number(row.log_numerator) + "," +
               format_number(row.log_denominator) + "," + format_number(row.log_ratio()) + "\n";
    return out;
}

std::string envelope_csv(const MonomialEnvelope& env) {
    std::string out = "n,a_n,t_n\n";
    for (const auto& line : env.lines()) {
        double t = std::numeric_limits<double>::quiet_NaN();
        if (line.touch_x) {
            Radius at = EvaluationGrid::radius_at(env.domain(), *line.touch_x);
            t = at.log_r;
        }
        out += std::to_string(line.slope) + "," + format_number(line.intercept) + "," + format_number(t) + "\n";
    }
    return out;
}

std::string analyze_csv(const WeightSpec& w, const WeightTable& table) {
    std::string out = "r,w,w_hat,ratio\n";
    const auto& grid = table.grid();
    for (std::size_t i = 0; i < table.size(); ++i) {
        double lw = w.log_value(grid.point(i));
        double lh = table.log_value(i);
        out += format_number(grid.r(i)) + "," + format_number(std::exp(lw)) + "," + format_number(std::exp(lh)) + "," +
               format_number(std::exp(lw - lh)) + "\n";
    }
    return out;
}

std::string table_csv(const WeightSpec& w, const WeightTable& table) {
    std::string out = "r,w,w_hat,active_slope,w_hat_prime\n";
    const auto& grid = table.grid();
    for (std::size_t i = 0; i < table.size(); ++i)
        out += format_number(grid.r(i)) + "," + format_number(std::exp(w.log_value(grid.point(i)))) + "," +
               format_number(std::exp(table.log_value(i))) + "," + std::to_string(table.active_slope(i)) + "," +
               format_number(std::exp(table.log_right_derivatives()[i])) + "\n";
    return out;
}

std::string series_csv(const PowerSeries& f) {
    std::string out = "index,re,im\n";
    for (const auto& t : f.terms()) {
        auto c = t.value();
        out += std::to_string(t.degree) + "," + format_number(c.real()) + "," + format_number(c.imag()) + "\n";
    }
    return out;
}

std::string pretty_table(const std::vector<Verdict>& verdicts) {
    std::vector<std::array<std::string, 4>> rows{{"criterion", "status", "constant", "tail_slope"}};
    for (const auto& v : verdicts)
        rows.push_back({to_string(v.criterion), to_string(v.status), format_short(v.constant), format_short(v.tail_slope)});
    std::array<std::size_t, 4> width{};
    for (const auto& row : rows)
        for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            if (c) os << " | ";
            os << rows[r][c];
            if (c < 3) os << std::string(width[c] - rows[r][c].size(), ' ');
        }
        os << "\n";
        if (r == 0) {
            for (std::size_t c = 0; c < 4; ++c) {
                if (c) os << "-+-";
                os << std::string(width[c], '-');
            }
            os << "\n";
        }
    }
    return os.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (content.empty()) throw ReportError("refusing to write empty report to " + path.string());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ReportError("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) {
            os.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw ReportError("write failed for " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignore;
        std::filesystem::remove(tmp, ignore);
        throw ReportError("cannot rename into " + path.string() + ": " + ec.message());
    }
}

}  // namespace weightlab
