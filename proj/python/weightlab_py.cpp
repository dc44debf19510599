#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "weightlab/cli.hpp"
#include "weightlab/criteria.hpp"
#include "weightlab/envelope.hpp"
#include "weightlab/power_series.hpp"
#include "weightlab/report.hpp"

namespace py = pybind11;
using namespace weightlab;

namespace {

Exponent to_exponent(const py::object& p) {
    if (py::isinstance<py::str>(p)) return Exponent::parse(p.cast<std::string>());
    return Exponent{p.cast<double>()};
}

// Everything derived from one weight on one grid.
struct Analysis {
    WeightSpec weight;
    EvaluationGrid grid;
    LogTransform phi;
    MonomialEnvelope envelope;
    WeightTable table;
};

Analysis analyse(const std::string& expr, const std::string& domain, std::size_t n_points,
                 std::optional<double> extent, std::optional<std::int64_t> n_max) {
    Domain d = parse_domain(domain);
    auto grid = EvaluationGrid::build(d, n_points, extent.value_or(default_extent(d)));
    auto w = WeightSpec::parse(d, expr);
    auto phi = log_transform(w, grid);
    auto env = monomial_coefficients(phi, n_max);
    auto table = associated_weight(env, grid);
    return {w, grid, std::move(phi), std::move(env), std::move(table)};
}

py::dict verdict_dict(const Verdict& v) {
    return py::module_::import("json").attr("loads")(verdict_to_json(v).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weight envelopes, operator criteria and Hardy means";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

    m.def("parse_expr", [](const std::string& text) { return parse_weight_expr(text)->to_string(); },
          py::arg("text"), "Canonical prefix form of a weight expression.");

    m.def("weight_value",
          [](const std::string& expr, const std::string& domain, double r) {
              return WeightSpec::parse(parse_domain(domain), expr).value(r);
          },
          py::arg("expr"), py::arg("domain"), py::arg("r"));

    m.def("validate",
          [](const std::string& expr, const std::string& domain, std::size_t n_points) {
              Domain d = parse_domain(domain);
              auto report = validate_weight(WeightSpec::parse(d, expr), default_grid(d, n_points));
              py::dict out;
              for (const auto& c : report.checks) out[py::str(c.name)] = c.passed;
              return out;
          },
          py::arg("expr"), py::arg("domain"), py::arg("n_points") = 512);

    py::class_<Analysis>(m, "Analysis")
        .def_property_readonly("log_convex", [](const Analysis& a) { return a.phi.convex(); })
        .def_property_readonly("n_max", [](const Analysis& a) { return a.envelope.n_max(); })
        .def_property_readonly("truncated", [](const Analysis& a) { return a.envelope.truncated(); })
        .def_property_readonly("radii",
                               [](const Analysis& a) {
                                   std::vector<double> r;
                                   for (const auto& p : a.grid.points()) r.push_back(p.r);
                                   return r;
                               })
        .def_property_readonly("log_w_hat", [](const Analysis& a) { return a.table.log_values(); })
        .def_property_readonly("active_slopes", [](const Analysis& a) { return a.table.active_slopes(); })
        .def("lines",
             [](const Analysis& a) {
                 std::vector<std::pair<std::int64_t, double>> out;
                 for (const auto& l : a.envelope.lines()) out.emplace_back(l.slope, l.intercept);
                 return out;
             },
             "(n, a_n) for every retained supporting line.")
        .def("log_w_hat_at", [](const Analysis& a, double r) { return a.envelope.log_value(Radius::from_r(r)); })
        .def("sandwich",
             [](const Analysis& a) {
                 auto s = sandwich_constants(a.weight, a.table);
                 return py::dict(py::arg("constant") = s.constant, py::arg("worst_radius") = s.worst_radius,
                                 py::arg("plain_ratio") = s.plain_ratio);
             })
        .def("check_j",
             [](const Analysis& a, const std::string& target) {
                 auto v = WeightSpec::parse(a.grid.domain(), target);
                 py::list out;
                 out.append(verdict_dict(check_integration_bounded(a.table, v, a.grid)));
                 if (a.grid.domain().is_plane()) out.append(verdict_dict(check_integration_compact(a.table, v, a.grid)));
                 return out;
             },
             py::arg("target"))
        .def("check_d",
             [](const Analysis& a, const py::object& p, std::optional<std::string> target) {
                 Exponent e = to_exponent(p);
                 py::list out;
                 if (!target) {
                     out.append(verdict_dict(a.grid.domain().is_plane()
                                                 ? check_D_self_plane(a.table, a.weight, e)
                                                 : check_D_disk_weighted_target(a.weight, e, 32, a.phi.convex())));
                     return out;
                 }
                 auto v = WeightSpec::parse(a.grid.domain(), *target);
                 auto vphi = log_transform(v, a.grid);
                 auto vtable = associated_weight(monomial_coefficients(vphi), a.grid);
                 out.append(verdict_dict(a.grid.domain().is_plane()
                                             ? check_differentiation_sufficient_plane(a.weight, v, a.grid)
                                             : check_differentiation_sufficient_disk(a.weight, v, a.grid)));
                 NecessaryOptions opts;
                 opts.w_log_convex = a.phi.convex();
                 opts.v_log_convex = vphi.convex();
                 out.append(verdict_dict(check_differentiation_necessary(a.table, vtable, e, opts)));
                 return out;
             },
             py::arg("p"), py::arg("target") = py::none())
        .def("envelope_series",
             [](const Analysis& a, std::optional<std::uint64_t> n_max) {
                 return envelope_series(a.envelope, n_max, a.grid.r(a.grid.size() - 1)).series;
             },
             py::arg("n_max") = py::none());

    m.def("analyze", &analyse, py::arg("expr"), py::arg("domain") = "plane", py::arg("n_points") = 512,
          py::arg("extent") = py::none(), py::arg("n_max") = py::none());

    m.def("doubling",
          [](const std::string& expr, int n_max) {
              return verdict_dict(doubling_constant(WeightSpec::parse(Domain::disk(), expr), n_max));
          },
          py::arg("expr"), py::arg("n_max") = 32);

    py::class_<PowerSeries>(m, "PowerSeries")
        .def(py::init([](const std::vector<std::complex<double>>& c, const std::string& label) {
                 return PowerSeries::from_coefficients(c, label);
             }),
             py::arg("coefficients"), py::arg("label") = "")
        .def_property_readonly("degree", &PowerSeries::degree)
        .def_property_readonly("label", &PowerSeries::label)
        .def("coefficients", &PowerSeries::dense)
        .def("__call__", &PowerSeries::operator())
        .def("mp",
             [](const PowerSeries& f, const py::object& p, double r, std::size_t m) {
                 auto q = m ? CircleQuadrature{m} : CircleQuadrature::for_series(f);
                 return mp_mean(f, to_exponent(p), r, q);
             },
             py::arg("p"), py::arg("r"), py::arg("m") = 0)
        .def("mp_quadrature",
             [](const PowerSeries& f, const py::object& p, double r) {
                 return std::exp(log_mp_mean_quadrature(f, to_exponent(p), r, CircleQuadrature::for_series(f)));
             },
             py::arg("p"), py::arg("r"))
        .def("m2_coefficients", [](const PowerSeries& f, double r) { return std::exp(log_m2_coefficients(f, r)); })
        .def("D", &apply_D)
        .def("J", &apply_J)
        .def("tail", &tail_series, py::arg("n"))
        .def("hardy_check",
             [](const PowerSeries& f, const py::object& p, std::size_t n_points) {
                 auto h = hardy_convexity_check(f, to_exponent(p), default_grid(Domain::plane(), n_points));
                 return py::dict(py::arg("max_violation") = h.max_violation,
                                 py::arg("monotonicity_violation") = h.monotonicity_violation);
             },
             py::arg("p"), py::arg("n_points") = 128);

    m.def("random_polynomials", &random_polynomials, py::arg("count"), py::arg("max_degree"), py::arg("seed"));
    m.def("monomials", &monomial_family, py::arg("n_max"));

    m.def("operator_norm",
          [](const std::string& op, const std::string& w, const std::string& v, const std::vector<PowerSeries>& samples,
             const std::string& domain, const py::object& p, std::size_t n_points) {
              Domain d = parse_domain(domain);
              Operator o = op == "D" ? Operator::D : op == "J" ? Operator::J : throw std::invalid_argument("op must be D or J");
              auto rep = empirical_operator_norm(o, WeightSpec::parse(d, w), WeightSpec::parse(d, v), samples,
                                                 default_grid(d, n_points), to_exponent(p));
              return py::module_::import("json").attr("loads")(oracle_to_json(rep).dump());
          },
          py::arg("op"), py::arg("w"), py::arg("v"), py::arg("samples"), py::arg("domain") = "plane",
          py::arg("p") = "inf", py::arg("n_points") = 512);

    m.def("cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              int code = cli::main_entry(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Run the command-line front end; returns (exit_code, stdout, stderr).");
}
