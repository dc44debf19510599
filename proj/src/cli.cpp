#include "weightlab/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <ostream>
#include <sstream>

#include "weightlab/criteria.hpp"
#include "weightlab/envelope.hpp"
#include "weightlab/expression.hpp"
#include "weightlab/power_series.hpp"
#include "weightlab/report.hpp"

namespace weightlab::cli {

namespace {

using nlohmann::json;

constexpr std::pair<Command, const char*> kCommands[] = {
    {Command::Analyze, "analyze"}, {Command::Envelope, "envelope"}, {Command::CheckJ, "check-j"},
    {Command::CheckD, "check-d"},  {Command::Doubling, "doubling"}, {Command::Mp, "mp"},
    {Command::Oracle, "oracle"},
};

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

// Everything a command needs about one weight on the request grid.
struct Prepared {
    WeightSpec weight;
    LogTransform phi;
    MonomialEnvelope envelope;
    WeightTable table;
};

EvaluationGrid make_grid(const AnalysisRequest& req) {
    double extent = req.extent.value_or(default_extent(req.domain));
    try {
        return EvaluationGrid::build(req.domain, req.grid_points, extent);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("grid: ") + e.what());
    }
}

WeightSpec parse_and_validate(const std::string& text, const EvaluationGrid& grid, const char* role) {
    WeightSpec w = WeightSpec::parse(grid.domain(), text);
    auto report = validate_weight(w, grid);
    if (const auto* bad = report.first_failure())
        throw ValidationFailure(bad->name, std::string(role) + " " + bad->name + ": " + bad->detail);
    return w;
}

Prepared prepare(const WeightSpec& w, const EvaluationGrid& grid, std::optional<std::int64_t> n_max) {
    LogTransform phi = log_transform(w, grid);
    MonomialEnvelope env = monomial_coefficients(phi, n_max);
    WeightTable table = associated_weight(env, grid);
    return {w, std::move(phi), std::move(env), std::move(table)};
}

Exponent require_p(const AnalysisRequest& req) {
    if (!req.p) throw UsageError("--p is required for " + to_string(req.command));
    return *req.p;
}

void print_notes(std::ostream& out, const std::vector<Verdict>& verdicts) {
    for (const auto& v : verdicts)
        for (const auto& n : v.notes) out << "note: " << to_string(v.criterion) << ": " << n << "\n";
}

int emit_verdicts(const AnalysisRequest& req, std::vector<Verdict> verdicts, int code, std::ostream& out) {
    if (verdicts.empty()) throw ReportError("no results to report");
    if (req.csv_path) {
        atomic_write(*req.csv_path, evidence_csv(verdicts.front()));
        verdicts.front().evidence_csv = *req.csv_path;
    }
    if (req.json_path) {
        json doc = json::array();
        for (const auto& v : verdicts) doc.push_back(verdict_to_json(v));
        atomic_write(*req.json_path, doc.dump(2) + "\n");
    }
    if (req.pretty) {
        out << pretty_table(verdicts);
        print_notes(out, verdicts);
    }
    return code;
}

void print_pairs(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    for (const auto& [k, v] : rows) out << k << std::string(width - k.size(), ' ') << " : " << v << "\n";
}

json grid_json(const EvaluationGrid& grid) {
    return {{"domain", grid.domain().name()}, {"n_points", grid.size()}, {"extent", number_to_json(grid.extent())}};
}

int cmd_analyze(const AnalysisRequest& req, std::ostream& out) {
    auto grid = make_grid(req);
    auto w = parse_and_validate(req.weight, grid, "weight");
    auto prep = prepare(w, grid, req.n_max);
    auto sandwich = sandwich_constants(w, prep.table);
    json doc{
        {"weight", w.label()},
        {"grid", grid_json(grid)},
        {"log_convex", prep.phi.convex()},
        {"worst_convexity_defect", number_to_json(prep.phi.worst_convexity_defect())},
        {"envelope", {{"lines", prep.envelope.lines().size()}, {"n_max", prep.envelope.n_max()}, {"truncated", prep.envelope.truncated()}}},
        {"sandwich", {{"constant", number_to_json(sandwich.constant)}, {"worst_radius", number_to_json(sandwich.worst_radius)}, {"plain_ratio", number_to_json(sandwich.plain_ratio)}}},
    };
    if (req.csv_path) atomic_write(*req.csv_path, analyze_csv(w, prep.table));
    if (req.json_path) atomic_write(*req.json_path, doc.dump(2) + "\n");
    if (req.pretty)
        print_pairs(out, {{"weight", w.label()},
                          {"domain", grid.domain().name()},
                          {"log_convex", prep.phi.convex() ? "true" : "false"},
                          {"envelope_lines", std::to_string(prep.envelope.lines().size())},
                          {"n_max", std::to_string(prep.envelope.n_max())},
                          {"truncated", prep.envelope.truncated() ? "true" : "false"},
                          {"sandwich_constant", format_short(sandwich.constant)},
                          {"worst_radius", format_short(sandwich.worst_radius)},
                          {"sup_w_over_w_hat", format_short(sandwich.plain_ratio)}});
    return kOk;
}

int cmd_envelope(const AnalysisRequest& req, std::ostream& out) {
    auto grid = make_grid(req);
    auto w = parse_and_validate(req.weight, grid, "weight");
    auto prep = prepare(w, grid, req.n_max);
    json lines = json::array();
    for (const auto& line : prep.envelope.lines()) {
        double t = std::numeric_limits<double>::quiet_NaN();
        if (line.touch_x) t = grid.radius_at(*line.touch_x).log_r;
        lines.push_back({{"n", line.slope}, {"a_n", number_to_json(line.intercept)}, {"t_n", number_to_json(t)}});
    }
    json doc{{"weight", w.label()},
             {"grid", grid_json(grid)},
             {"n_max", prep.envelope.n_max()},
             {"truncated", prep.envelope.truncated()},
             {"lines", lines}};
    if (req.csv_path) {
        std::filesystem::path table_path(*req.csv_path);
        table_path.replace_extension(".table.csv");
        atomic_write(*req.csv_path, envelope_csv(prep.envelope));
        atomic_write(table_path, table_csv(w, prep.table));
    }
    if (req.json_path) atomic_write(*req.json_path, doc.dump(2) + "\n");
    if (req.pretty) {
        print_pairs(out, {{"weight", w.label()},
                          {"lines", std::to_string(prep.envelope.lines().size())},
                          {"max_slope", std::to_string(prep.envelope.max_slope())},
                          {"n_max", std::to_string(prep.envelope.n_max())},
                          {"truncated", prep.envelope.truncated() ? "true" : "false"}});
        if (prep.envelope.truncated()) out << "note: envelope truncated at n_max; raise --n-max\n";
    }
    return kOk;
}

int cmd_check_j(const AnalysisRequest& req, std::ostream& out) {
    if (!req.target) throw UsageError("--target is required for check-j");
    auto grid = make_grid(req);
    auto w = parse_and_validate(req.weight, grid, "weight");
    auto v = parse_and_validate(*req.target, grid, "target");
    auto prep = prepare(w, grid, req.n_max);
    std::vector<Verdict> verdicts{check_integration_bounded(prep.table, v, grid)};
    if (grid.domain().is_plane()) verdicts.push_back(check_integration_compact(prep.table, v, grid));
    return emit_verdicts(req, verdicts, exit_code(verdicts.front().status), out);
}

int cmd_check_d(const AnalysisRequest& req, std::ostream& out) {
    Exponent p = require_p(req);
    if (p.is_any()) throw UsageError("--p must be a positive real or inf");
    auto grid = make_grid(req);
    auto w = parse_and_validate(req.weight, grid, "weight");
    auto prep = prepare(w, grid, req.n_max);
    if (!req.target) {
        Verdict v = grid.domain().is_plane() ? check_D_self_plane(prep.table, w, p)
                                             : check_D_disk_weighted_target(w, p, 32, prep.phi.convex());
        return emit_verdicts(req, {v}, exit_code(v.status), out);
    }
    auto target = parse_and_validate(*req.target, grid, "target");
    auto tprep = prepare(target, grid, req.n_max);
    Verdict suff = grid.domain().is_plane() ? check_differentiation_sufficient_plane(w, target, grid)
                                            : check_differentiation_sufficient_disk(w, target, grid);
    NecessaryOptions opts;
    opts.w_log_convex = prep.phi.convex();
    opts.v_log_convex = tprep.phi.convex();
    Verdict nec = check_differentiation_necessary(prep.table, tprep.table, p, opts);
    int code = kInconclusive;
    if (nec.status == Status::VIOLATED)
        code = kViolated;
    else if (suff.status == Status::SATISFIED)
        code = kOk;
    return emit_verdicts(req, {suff, nec}, code, out);
}

int cmd_doubling(const AnalysisRequest& req, std::ostream& out) {
    if (!req.domain.is_disk()) throw UsageError("doubling is defined on the disk only");
    auto grid = make_grid(req);
    auto w = parse_and_validate(req.weight, grid, "weight");
    std::int64_t n = req.n_max.value_or(32);
    if (n < 1 || n > 60) throw UsageError("--n-max for doubling must be in [1, 60]");
    Verdict v = doubling_constant(w, static_cast<int>(n));
    return emit_verdicts(req, {v}, exit_code(v.status), out);
}

int cmd_mp(const AnalysisRequest& req, std::ostream& out) {
    Exponent p = require_p(req);
    if (p.is_any()) throw UsageError("--p must be a positive real or inf");
    auto grid = make_grid(req);
    auto w = parse_and_validate(req.weight, grid, "weight");
    auto prep = prepare(w, grid, std::nullopt);
    std::optional<std::uint64_t> cut;
    if (req.n_max) {
        if (*req.n_max < 0) throw UsageError("--n-max must be non-negative");
        cut = static_cast<std::uint64_t>(*req.n_max);
    }
    auto g = envelope_series(prep.envelope, cut, grid.r(grid.size() - 1));
    std::vector<double> radii;
    for (const auto& pt : grid.points()) radii.push_back(pt.r);
    std::vector<double> logs;
    try {
        bool fits = 4 * (g.series.degree() + 1) <= kMaxQuadrature;
        auto q = fits ? CircleQuadrature::for_series(g.series) : CircleQuadrature{kMaxQuadrature};
        logs = log_mp_profile(g.series, p, radii, q);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("mp: ") + e.what());
    }
    std::string csv = "r,mp,w,ratio\n";
    double best = -std::numeric_limits<double>::infinity();
    double best_r = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double lw = w.log_value(grid.point(i));
        csv += format_number(radii[i]) + "," + format_number(std::exp(logs[i])) + "," + format_number(std::exp(lw)) +
               "," + format_number(std::exp(logs[i] - lw)) + "\n";
        if (logs[i] - lw > best) {
            best = logs[i] - lw;
            best_r = radii[i];
        }
    }
    json doc{{"weight", w.label()},
             {"p", p.to_string()},
             {"grid", grid_json(grid)},
             {"series", {{"terms", g.series.terms().size()}, {"degree", g.series.degree()}, {"n_max", g.n_max}}},
             {"truncated", g.truncated},
             {"truncation_bound", number_to_json(g.truncation_bound)},
             {"sup_ratio", number_to_json(std::exp(best))},
             {"argmax_radius", number_to_json(best_r)}};
    if (req.csv_path) atomic_write(*req.csv_path, csv);
    if (req.json_path) atomic_write(*req.json_path, doc.dump(2) + "\n");
    if (req.pretty) {
        print_pairs(out, {{"weight", w.label()},
                          {"p", p.to_string()},
                          {"terms", std::to_string(g.series.terms().size())},
                          {"degree", std::to_string(g.series.degree())},
                          {"sup_mp_over_w", format_short(std::exp(best))},
                          {"argmax_radius", format_short(best_r)},
                          {"truncation_bound", format_short(g.truncation_bound)}});
        if (g.truncated) out << "note: series truncated below the active slope at the grid end\n";
    }
    return kOk;
}

int cmd_oracle(const AnalysisRequest& req, std::ostream& out) {
    Exponent p = require_p(req);
    if (p.is_any()) throw UsageError("--p must be a positive real or inf");
    auto grid = make_grid(req);
    auto w = parse_and_validate(req.weight, grid, "weight");
    std::optional<WeightSpec> v;
    if (req.target) v = parse_and_validate(*req.target, grid, "target");
    auto prep = prepare(w, grid, std::nullopt);
    std::int64_t n = req.n_max.value_or(40);
    if (n < 0) throw UsageError("--n-max must be non-negative");
    std::vector<PowerSeries> samples = monomial_family(static_cast<std::uint64_t>(n));
    auto g = envelope_series(prep.envelope).series;
    samples.push_back(g);
    samples.push_back(tail_series(g, 2));
    for (auto& f : random_polynomials(16, 16, req.seed)) samples.push_back(std::move(f));

    WeightSpec d_target = v ? *v : (grid.domain().is_plane() ? w : weighted_target(w));
    WeightSpec j_target = v ? *v : w;
    std::vector<OracleReport> reports{empirical_operator_norm(Operator::D, w, d_target, samples, grid, p),
                                      empirical_operator_norm(Operator::J, w, j_target, samples, grid, p)};
    json doc = json::array();
    for (const auto& r : reports) doc.push_back(oracle_to_json(r));
    if (req.csv_path) {
        std::string csv = "op,p,lower_bound,argmax_sample,argmax_radius\n";
        for (const auto& r : reports)
            csv += to_string(r.op) + "," + r.p.to_string() + "," + format_number(r.lower_bound) + "," + r.argmax_sample +
                   "," + format_number(r.argmax_radius) + "\n";
        atomic_write(*req.csv_path, csv);
    }
    if (req.json_path) atomic_write(*req.json_path, doc.dump(2) + "\n");
    if (req.pretty) {
        for (const auto& r : reports) {
            out << to_string(r.op) << ": lower_bound " << format_short(r.lower_bound) << " sample " << r.argmax_sample
                << " r " << format_short(r.argmax_radius) << "\n";
            for (const auto& note : r.notes) out << "note: " << to_string(r.op) << ": " << note << "\n";
        }
    }
    return kOk;
}

}  // namespace

std::string to_string(Command c) {
    for (const auto& [k, name] : kCommands)
        if (k == c) return name;
    return "unknown";
}

Command parse_command(const std::string& text) {
    for (const auto& [k, name] : kCommands)
        if (text == name) return k;
    throw UsageError("unknown command '" + text + "'");
}

int exit_code(Status s) {
    switch (s) {
        case Status::SATISFIED: return kOk;
        case Status::VIOLATED: return kViolated;
        case Status::INCONCLUSIVE: return kInconclusive;
    }
    return kInconclusive;
}

std::optional<AnalysisRequest> parse_args(const std::vector<std::string>& args, std::ostream& help_out) {
    CLI::App app{"Weight envelopes and operator criteria for growth spaces", "weightlab"};
    std::string command, domain = "disk", p, target;
    AnalysisRequest req;
    double extent = 0.0;
    std::int64_t n_max = 0;
    std::string json_path, csv_path;
    std::vector<std::string> names;
    for (const auto& [k, name] : kCommands) names.emplace_back(name);

    app.add_option("command", command, "analyze|envelope|check-j|check-d|doubling|mp|oracle")
        ->required()
        ->check(CLI::IsMember(names));
    app.add_option("--weight", req.weight, "weight expression in r")->required();
    auto* target_opt = app.add_option("--target", target, "target weight expression");
    app.add_option("--domain", domain, "disk or plane")->check(CLI::IsMember({"disk", "plane"}));
    auto* p_opt = app.add_option("--p", p, "exponent: positive real or inf");
    app.add_option("--grid-points", req.grid_points, "grid size")->check(CLI::Range(std::size_t{16}, std::size_t{1} << 20));
    auto* extent_opt = app.add_option("--extent", extent, "plane: largest r; disk: largest log 1/(1-r)");
    auto* nmax_opt = app.add_option("--n-max", n_max, "largest slope / dyadic level / monomial degree");
    auto* json_opt = app.add_option("--json", json_path, "write JSON report");
    auto* csv_opt = app.add_option("--csv", csv_path, "write CSV report");
    app.add_option("--seed", req.seed, "seed for random samples");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        help_out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(one_line(e.what()));
    }
    req.command = parse_command(command);
    req.domain = parse_domain(domain);
    if (*target_opt) req.target = target;
    if (*p_opt) {
        try {
            req.p = Exponent::parse(p);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (*extent_opt) req.extent = extent;
    if (*nmax_opt) req.n_max = n_max;
    if (*json_opt) req.json_path = json_path;
    if (*csv_opt) req.csv_path = csv_path;
    return req;
}

int run(const AnalysisRequest& req, std::ostream& out, std::ostream& err) {
    try {
        switch (req.command) {
            case Command::Analyze: return cmd_analyze(req, out);
            case Command::Envelope: return cmd_envelope(req, out);
            case Command::CheckJ: return cmd_check_j(req, out);
            case Command::CheckD: return cmd_check_d(req, out);
            case Command::Doubling: return cmd_doubling(req, out);
            case Command::Mp: return cmd_mp(req, out);
            case Command::Oracle: return cmd_oracle(req, out);
        }
        throw UsageError("unknown command");
    } catch (const UsageError& e) {
        err << "error: usage: " << one_line(e.what()) << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: parse: " << one_line(e.what()) << "\n";
        return kValidation;
    } catch (const ValidationFailure& e) {
        err << "error: validation: " << one_line(e.what()) << "\n";
        return kValidation;
    } catch (const ReportError& e) {
        err << "error: io: " << one_line(e.what()) << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: runtime: " << one_line(e.what()) << "\n";
        return kUsage;
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::optional<AnalysisRequest> req;
    try {
        req = parse_args(args, out);
    } catch (const std::exception& e) {
        err << "error: usage: " << one_line(e.what()) << "\n";
        return kUsage;
    }
    if (!req) return kOk;
    return run(*req, out, err);
}

}  // namespace weightlab::cli
