#include "weightlab/expression.hpp"

#include <cctype>
#include <charconv>
#include <cfloat>
#include <cmath>

namespace weightlab {

namespace {

constexpr double kPlainLogLimit = 700.0;

bool representable(double v) { return std::isfinite(v) && (v == 0.0 || std::fabs(v) >= DBL_MIN); }

}  // namespace

LogScalar LogScalar::from_double(double v) {
    LogScalar s;
    s.plain = v;
    s.has_plain = std::isfinite(v);
    if (v > 0.0) {
        s.sign = 1;
    } else if (v < 0.0) {
        s.sign = -1;
    }
    s.log_abs = s.sign == 0 ? -std::numeric_limits<double>::infinity() : std::log(std::fabs(v));
    return s;
}

LogScalar LogScalar::from_log(int sign, double log_abs) {
    LogScalar s;
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) {
        return from_double(0.0);
    }
    s.sign = sign;
    s.log_abs = log_abs;
    s.has_plain = std::fabs(log_abs) <= kPlainLogLimit;
    s.plain = s.has_plain ? sign * std::exp(log_abs) : 0.0;
    return s;
}

double LogScalar::value() const {
    if (has_plain) return plain;
    if (sign == 0) return 0.0;
    return log_abs > 0.0 ? sign * std::numeric_limits<double>::infinity() : sign * 0.0;
}

LogScalar operator+(const LogScalar& a, const LogScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.has_plain && b.has_plain) {
        double s = a.plain + b.plain;
        if (representable(s)) return LogScalar::from_double(s);
    }
    const LogScalar& big = a.log_abs >= b.log_abs ? a : b;
    const LogScalar& small = a.log_abs >= b.log_abs ? b : a;
    double gap = small.log_abs - big.log_abs;
    if (a.sign == b.sign) {
        return LogScalar::from_log(big.sign, big.log_abs + std::log1p(std::exp(gap)));
    }
    if (gap == 0.0) return LogScalar::from_double(0.0);
    return LogScalar::from_log(big.sign, big.log_abs + std::log1p(-std::exp(gap)));
}

LogScalar operator-(const LogScalar& a) {
    LogScalar n = a;
    n.sign = -a.sign;
    n.plain = -a.plain;
    return n;
}

LogScalar operator-(const LogScalar& a, const LogScalar& b) { return a + (-b); }

LogScalar operator*(const LogScalar& a, const LogScalar& b) {
    if (a.is_zero() || b.is_zero()) return LogScalar::from_double(0.0);
    if (a.has_plain && b.has_plain) {
        double p = a.plain * b.plain;
        if (representable(p) && p != 0.0) return LogScalar::from_double(p);
    }
    return LogScalar::from_log(a.sign * b.sign, a.log_abs + b.log_abs);
}

LogScalar operator/(const LogScalar& a, const LogScalar& b) {
    if (b.is_zero()) throw EvaluationError("division by zero");
    if (a.is_zero()) return a;
    if (a.has_plain && b.has_plain) {
        double q = a.plain / b.plain;
        if (representable(q) && q != 0.0) return LogScalar::from_double(q);
    }
    return LogScalar::from_log(a.sign * b.sign, a.log_abs - b.log_abs);
}

namespace {

LogScalar power(const LogScalar& base, const LogScalar& exponent) {
    double e = exponent.value();
    if (!std::isfinite(e)) throw EvaluationError("overflow in exponent");
    if (base.is_zero()) {
        if (e > 0.0) return base;
        if (e == 0.0) return LogScalar::from_double(1.0);
        throw EvaluationError("zero raised to a negative power");
    }
    int sign = 1;
    if (base.sign < 0) {
        if (e != std::trunc(e)) throw EvaluationError("negative base with non-integer exponent");
        sign = std::fmod(std::fabs(e), 2.0) == 1.0 ? -1 : 1;
    }
    if (base.has_plain) {
        double p = std::pow(base.plain, e);
        if (representable(p) && p != 0.0) return LogScalar::from_double(p);
    }
    double log_abs = e * base.log_abs;
    if (std::isnan(log_abs)) throw EvaluationError("undefined power");
    if (log_abs == std::numeric_limits<double>::infinity()) throw EvaluationError("overflow in power");
    return LogScalar::from_log(sign, log_abs);
}

LogScalar exponential(const LogScalar& arg) {
    double x = arg.value();
    if (std::isnan(x)) throw EvaluationError("undefined exponential");
    if (x == std::numeric_limits<double>::infinity()) throw EvaluationError("overflow in exp");
    LogScalar s;
    s.sign = 1;
    s.log_abs = x;
    s.has_plain = x <= 709.0;
    s.plain = s.has_plain ? std::exp(x) : 0.0;
    return s;
}

LogScalar logarithm(const LogScalar& arg) {
    if (arg.sign <= 0) throw EvaluationError("log of a non-positive value");
    return LogScalar::from_double(arg.log_abs);
}

}  // namespace

Expr::Ptr Expr::number(double value) { return std::make_shared<const Expr>(ExprKind::Number, value, nullptr, nullptr); }

Expr::Ptr Expr::var() { return std::make_shared<const Expr>(ExprKind::Var, 0.0, nullptr, nullptr); }

Expr::Ptr Expr::binary(ExprKind kind, Ptr lhs, Ptr rhs) {
    return std::make_shared<const Expr>(kind, 0.0, std::move(lhs), std::move(rhs));
}

Expr::Ptr Expr::call(ExprKind kind, Ptr arg) { return std::make_shared<const Expr>(kind, 0.0, std::move(arg), nullptr); }

LogScalar Expr::evaluate(const Radius& radius) const {
    switch (kind_) {
        case ExprKind::Number:
            return LogScalar::from_double(value_);
        case ExprKind::Var: {
            LogScalar s = LogScalar::from_double(radius.r);
            if (radius.r > 0.0) s.log_abs = radius.log_r;
            return s;
        }
        case ExprKind::Add:
            return lhs_->evaluate(radius) + rhs_->evaluate(radius);
        case ExprKind::Sub:
            // 1 - r uses the carried complement.
            if (lhs_->kind_ == ExprKind::Number && lhs_->value_ == 1.0 && rhs_->kind_ == ExprKind::Var) {
                return LogScalar::from_double(radius.complement);
            }
            return lhs_->evaluate(radius) - rhs_->evaluate(radius);
        case ExprKind::Mul:
            return lhs_->evaluate(radius) * rhs_->evaluate(radius);
        case ExprKind::Div:
            return lhs_->evaluate(radius) / rhs_->evaluate(radius);
        case ExprKind::Pow:
            return power(lhs_->evaluate(radius), rhs_->evaluate(radius));
        case ExprKind::Exp:
            return exponential(lhs_->evaluate(radius));
        case ExprKind::Log:
            return logarithm(lhs_->evaluate(radius));
    }
    throw EvaluationError("unknown expression node");
}

std::string Expr::to_string() const {
    switch (kind_) {
        case ExprKind::Number: {
            char buf[64];
            auto res = std::to_chars(buf, buf + sizeof buf, value_);
            return std::string(buf, res.ptr);
        }
        case ExprKind::Var:
            return "r";
        case ExprKind::Add:
            return "add(" + lhs_->to_string() + ", " + rhs_->to_string() + ")";
        case ExprKind::Sub:
            return "sub(" + lhs_->to_string() + ", " + rhs_->to_string() + ")";
        case ExprKind::Mul:
            return "mul(" + lhs_->to_string() + ", " + rhs_->to_string() + ")";
        case ExprKind::Div:
            return "div(" + lhs_->to_string() + ", " + rhs_->to_string() + ")";
        case ExprKind::Pow:
            return "pow(" + lhs_->to_string() + ", " + rhs_->to_string() + ")";
        case ExprKind::Exp:
            return "exp(" + lhs_->to_string() + ")";
        case ExprKind::Log:
            return "log(" + lhs_->to_string() + ")";
    }
    return "?";
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr::Ptr parse() {
        skip_space();
        auto e = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "'");
        }
    }

    Expr::Ptr expr() {
        auto lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(ExprKind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = Expr::binary(ExprKind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    Expr::Ptr term() {
        auto lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(ExprKind::Mul, lhs, factor());
            } else if (accept('/')) {
                lhs = Expr::binary(ExprKind::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    Expr::Ptr factor() {
        auto b = base();
        if (accept('^')) return Expr::binary(ExprKind::Pow, b, factor());
        return b;
    }

    Expr::Ptr base() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string_view ident = text_.substr(start, pos_ - start);
            if (ident == "r") return Expr::var();
            if (ident == "exp" || ident == "log") {
                expect('(');
                auto arg = expr();
                expect(')');
                return Expr::call(ident == "exp" ? ExprKind::Exp : ExprKind::Log, arg);
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(ident) + "'");
        }
        if (c == '(') {
            ++pos_;
            auto e = expr();
            expect(')');
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Expr::Ptr number() {
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return Expr::number(value);
    }
};

}  // namespace

Expr::Ptr parse_weight_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace weightlab
