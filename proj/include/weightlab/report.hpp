#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "weightlab/envelope.hpp"
#include "weightlab/power_series.hpp"
#include "weightlab/verdict.hpp"

namespace weightlab {

/// Shortest round-trip decimal; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);
/// Fixed-width human formatting (6 significant digits).
std::string format_short(double x);

/// Non-finite numbers become the strings "inf", "-inf", "nan".
nlohmann::json number_to_json(double x);
double number_from_json(const nlohmann::json& j);

/// {criterion, status, constant, tail_slope, p, grid, evidence_csv,
/// auxiliary, notes}. Evidence rows live in the CSV, not the JSON.
nlohmann::json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);
/// Equality on the serialised fields.
bool same_report(const Verdict& a, const Verdict& b);

nlohmann::json oracle_to_json(const OracleReport& report);
OracleReport oracle_from_json(const nlohmann::json& j);

/// "r,log_numerator,log_denominator,log_ratio" rows.
std::string evidence_csv(const Verdict& v);
/// "n,a_n,t_n": slope, intercept, log r at the touch point.
std::string envelope_csv(const MonomialEnvelope& env);
/// "r,w,w_hat,active_slope,w_hat_prime".
std::string table_csv(const WeightSpec& w, const WeightTable& table);
/// "r,w,w_hat,ratio" with ratio = w / w_hat.
std::string analyze_csv(const WeightSpec& w, const WeightTable& table);
/// "index,re,im".
std::string series_csv(const PowerSeries& f);

/// criterion | status | constant | tail_slope.
std::string pretty_table(const std::vector<Verdict>& verdicts);

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes through a temporary file in the same directory and renames it
/// into place. Throws ReportError on empty content or I/O failure; no
/// partial file is left behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace weightlab
