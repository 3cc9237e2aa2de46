#include "dampwave/expression.hpp"

#include "dampwave/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace dampwave::expr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const char* function_name(Function f) {
    switch (f) {
        case Function::sin: return "sin";
        case Function::cos: return "cos";
        case Function::exp: return "exp";
        case Function::sqrt: return "sqrt";
        case Function::abs: return "abs";
    }
    return "?";
}

char op_char(BinaryOp op) {
    switch (op) {
        case BinaryOp::add: return '+';
        case BinaryOp::sub: return '-';
        case BinaryOp::mul: return '*';
        case BinaryOp::div: return '/';
        case BinaryOp::pow: return '^';
    }
    return '?';
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        skip_space();
        if (pos_ == text_.size()) fail({"expression"});
        NodePtr e = parse_sum();
        skip_space();
        if (pos_ != text_.size()) fail({"operator", "end of input"});
        return e;
    }

private:
    // sum     := product (('+' | '-') product)*
    // product := unary (('*' | '/') unary)*
    // unary   := '-' unary | power
    // power   := primary ('^' unary)?
    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            skip_space();
            if (accept('+')) {
                lhs = make_binary(BinaryOp::add, lhs, parse_product());
            } else if (accept('-')) {
                lhs = make_binary(BinaryOp::sub, lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            skip_space();
            if (accept('*')) {
                lhs = make_binary(BinaryOp::mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = make_binary(BinaryOp::div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        skip_space();
        if (accept('-')) return make_negate(parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        skip_space();
        if (accept('^')) return make_binary(BinaryOp::pow, base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        skip_space();
        if (pos_ == text_.size()) fail({"number", "identifier", "("});
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail({"number", "identifier", "("});
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) {
            pos_ = start;
            fail({"number"});
        }
        return make_number(v);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x") return make_var(Variable::x);
        if (name == "t") return make_var(Variable::t);
        if (name == "pi") return make_pi();

        static constexpr std::pair<std::string_view, Function> functions[] = {
            {"sin", Function::sin}, {"cos", Function::cos}, {"exp", Function::exp},
            {"sqrt", Function::sqrt}, {"abs", Function::abs}};
        for (const auto& [fname, fn] : functions) {
            if (name == fname) {
                skip_space();
                expect('(');
                NodePtr arg = parse_sum();
                expect(')');
                return make_call(fn, arg);
            }
        }
        throw ParseError(start, {"x", "t", "pi", "sin", "cos", "exp", "sqrt", "abs"},
                         "unknown identifier '" + std::string(name) + "' at offset " +
                             std::to_string(start));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_space();
        if (!accept(c)) fail({std::string(1, c)});
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::ostringstream msg;
        msg << "syntax error at offset " << pos_ << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg << (i + 1 == expected.size() ? " or " : ", ");
            msg << '"' << expected[i] << '"';
        }
        if (pos_ < text_.size()) {
            msg << ", found '" << text_[pos_] << "'";
        } else {
            msg << ", found end of input";
        }
        throw ParseError(pos_, std::move(expected), msg.str());
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double checked(double v, const Node& n) {
    if (!std::isfinite(v)) {
        throw EvalError(to_string(n), "non-finite value from '" + to_string(n) + "'");
    }
    return v;
}

double eval_node(const Node& n, double x, double t) {
    return std::visit(
        overloaded{
            [](const Number& v) { return v.value; },
            [&](const Var& v) { return v.which == Variable::x ? x : t; },
            [](const Pi&) { return std::numbers::pi; },
            [&](const Negate& u) { return -eval_node(*u.operand, x, t); },
            [&](const Binary& b) {
                const double l = eval_node(*b.lhs, x, t);
                const double r = eval_node(*b.rhs, x, t);
                switch (b.op) {
                    case BinaryOp::add: return checked(l + r, n);
                    case BinaryOp::sub: return checked(l - r, n);
                    case BinaryOp::mul: return checked(l * r, n);
                    case BinaryOp::div: return checked(l / r, n);
                    case BinaryOp::pow:
                        if (l < 0.0 && r != std::floor(r)) {
                            throw EvalError(to_string(n), "negative base with non-integer exponent in '" +
                                                              to_string(n) + "'");
                        }
                        return checked(std::pow(l, r), n);
                }
                return 0.0;
            },
            [&](const Call& c) {
                const double a = eval_node(*c.arg, x, t);
                switch (c.fn) {
                    case Function::sin: return std::sin(a);
                    case Function::cos: return std::cos(a);
                    case Function::exp: return checked(std::exp(a), n);
                    case Function::sqrt:
                        if (a < 0.0) {
                            throw EvalError(to_string(n), "sqrt of negative value in '" + to_string(n) + "'");
                        }
                        return std::sqrt(a);
                    case Function::abs: return std::abs(a);
                }
                return 0.0;
            },
        },
        n.kind);
}

bool uses_node(const Node& n, Variable v) {
    return std::visit(overloaded{
                          [](const Number&) { return false; },
                          [&](const Var& u) { return u.which == v; },
                          [](const Pi&) { return false; },
                          [&](const Negate& u) { return uses_node(*u.operand, v); },
                          [&](const Binary& b) { return uses_node(*b.lhs, v) || uses_node(*b.rhs, v); },
                          [&](const Call& c) { return uses_node(*c.arg, v); },
                      },
                      n.kind);
}

}  // namespace

NodePtr make_number(double v) { return std::make_shared<const Node>(Node{Number{v}}); }
NodePtr make_var(Variable v) { return std::make_shared<const Node>(Node{Var{v}}); }
NodePtr make_pi() { return std::make_shared<const Node>(Node{Pi{}}); }
NodePtr make_negate(NodePtr operand) {
    return std::make_shared<const Node>(Node{Negate{std::move(operand)}});
}
NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
    return std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}});
}
NodePtr make_call(Function fn, NodePtr arg) {
    return std::make_shared<const Node>(Node{Call{fn, std::move(arg)}});
}

bool equal(const Node& a, const Node& b) {
    if (a.kind.index() != b.kind.index()) return false;
    return std::visit(
        overloaded{
            [&](const Number& u) { return u.value == std::get<Number>(b.kind).value; },
            [&](const Var& u) { return u.which == std::get<Var>(b.kind).which; },
            [](const Pi&) { return true; },
            [&](const Negate& u) { return equal(*u.operand, *std::get<Negate>(b.kind).operand); },
            [&](const Binary& u) {
                const auto& w = std::get<Binary>(b.kind);
                return u.op == w.op && equal(*u.lhs, *w.lhs) && equal(*u.rhs, *w.rhs);
            },
            [&](const Call& u) {
                const auto& w = std::get<Call>(b.kind);
                return u.fn == w.fn && equal(*u.arg, *w.arg);
            },
        },
        a.kind);
}

std::string to_string(const Node& n) {
    return std::visit(
        overloaded{
            [](const Number& v) { return format_number(v.value); },
            [](const Var& v) { return std::string(v.which == Variable::x ? "x" : "t"); },
            [](const Pi&) { return std::string("pi"); },
            [](const Negate& u) { return "(-" + to_string(*u.operand) + ")"; },
            [](const Binary& b) {
                return "(" + to_string(*b.lhs) + op_char(b.op) + to_string(*b.rhs) + ")";
            },
            [](const Call& c) { return std::string(function_name(c.fn)) + "(" + to_string(*c.arg) + ")"; },
        },
        n.kind);
}

Expression::Expression(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw InvalidArgument("expression root is null");
}

double Expression::operator()(double x, double t) const { return eval_node(*root_, x, t); }

std::string Expression::to_string() const { return expr::to_string(*root_); }

bool Expression::uses(Variable v) const { return uses_node(*root_, v); }

bool operator==(const Expression& a, const Expression& b) { return equal(*a.root_, *b.root_); }

Expression parse_expression(std::string_view text) { return Expression(Parser(text).parse()); }

double eval_expression(const Expression& e, double x, double t) { return e(x, t); }

}  // namespace dampwave::expr
