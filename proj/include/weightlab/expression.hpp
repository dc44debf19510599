#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "weightlab/domain.hpp"

namespace weightlab {

/// Signed magnitude kept both as a plain double (while representable) and
/// as a logarithm.
struct LogScalar {
    int sign = 0;  // -1, 0, +1
    double log_abs = -std::numeric_limits<double>::infinity();
    double plain = 0.0;
    bool has_plain = true;

    static LogScalar from_double(double v);
    static LogScalar from_log(int sign, double log_abs);

    bool is_zero() const { return sign == 0; }
    /// Plain value; +-inf or 0 when out of double range.
    double value() const;
};

LogScalar operator+(const LogScalar& a, const LogScalar& b);
LogScalar operator-(const LogScalar& a);
LogScalar operator-(const LogScalar& a, const LogScalar& b);
LogScalar operator*(const LogScalar& a, const LogScalar& b);
LogScalar operator/(const LogScalar& a, const LogScalar& b);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExprKind { Number, Var, Add, Sub, Mul, Div, Pow, Exp, Log };

/// Immutable expression tree over the variable r.
class Expr {
public:
    using Ptr = std::shared_ptr<const Expr>;

    static Ptr number(double value);
    static Ptr var();
    static Ptr binary(ExprKind kind, Ptr lhs, Ptr rhs);
    static Ptr call(ExprKind kind, Ptr arg);

    ExprKind kind() const { return kind_; }
    double number_value() const { return value_; }
    const Ptr& lhs() const { return lhs_; }
    const Ptr& rhs() const { return rhs_; }

    LogScalar evaluate(const Radius& radius) const;

    /// Canonical prefix form, e.g. exp(div(1, sub(1, r))).
    std::string to_string() const;

    Expr(ExprKind kind, double value, Ptr lhs, Ptr rhs)
        : kind_(kind), value_(value), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

private:
    ExprKind kind_;
    double value_ = 0.0;
    Ptr lhs_;
    Ptr rhs_;
};

/// Parses the weight grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' factor)?
///   base   := number | 'r' | '(' expr ')' | ('exp'|'log') '(' expr ')'
/// Whitespace between tokens is ignored.
Expr::Ptr parse_weight_expr(std::string_view text);

}  // namespace weightlab
