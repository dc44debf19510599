#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "weightlab/domain.hpp"
#include "weightlab/verdict.hpp"

namespace weightlab::cli {

enum class Command { Analyze, Envelope, CheckJ, CheckD, Doubling, Mp, Oracle };

std::string to_string(Command c);
Command parse_command(const std::string& text);

struct AnalysisRequest {
    Command command = Command::Analyze;
    std::string weight;
    std::optional<std::string> target;
    Domain domain = Domain::disk();
    std::optional<Exponent> p;
    std::size_t grid_points = 512;
    std::optional<double> extent;
    std::optional<std::int64_t> n_max;
    std::optional<std::string> json_path;
    std::optional<std::string> csv_path;
    bool pretty = true;
    std::uint64_t seed = 0;
};

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kViolated = 3, kInconclusive = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Weight rejected by validation; `check` names the failed check.
class ValidationFailure : public std::runtime_error {
public:
    ValidationFailure(std::string check, const std::string& what) : std::runtime_error(what), check_(std::move(check)) {}
    const std::string& check() const { return check_; }

private:
    std::string check_;
};

/// args excludes the program name. Throws UsageError. Returns nullopt when
/// help was requested (the help text goes to `help_out`).
std::optional<AnalysisRequest> parse_args(const std::vector<std::string>& args, std::ostream& help_out);

/// Runs the request, printing a report to `out` and writing any requested
/// files. Failures produce a single "error: <kind>: <reason>" line on `err`.
int run(const AnalysisRequest& request, std::ostream& out, std::ostream& err);

/// parse_args + run.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Exit code for a verdict status.
int exit_code(Status s);

}  // namespace weightlab::cli
