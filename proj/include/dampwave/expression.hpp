#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace dampwave::expr {

enum class Variable { x, t };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, exp, sqrt, abs };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
    double value;
};
struct Var {
    Variable which;
};
struct Pi {};
struct Negate {
    NodePtr operand;
};
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct Call {
    Function fn;
    NodePtr arg;
};

struct Node {
    std::variant<Number, Var, Pi, Negate, Binary, Call> kind;
};

/// Immutable expression tree over x, t, pi, + - * / ^, unary minus and
/// sin, cos, exp, sqrt, abs. Copies share the tree.
class Expression {
public:
    explicit Expression(NodePtr root);

    const Node& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }

    /// Evaluates at (x, t). Throws EvalError on a domain error or any
    /// non-finite intermediate, naming the offending sub-expression.
    double operator()(double x, double t = 0.0) const;

    /// Fully parenthesized text that parses back to an equal tree.
    std::string to_string() const;

    bool uses(Variable v) const;

    friend bool operator==(const Expression& a, const Expression& b);

private:
    NodePtr root_;
};

/// Recursive-descent parser. Precedence, tightest first: `^` (right
/// associative), unary minus, `* /`, `+ -`.
Expression parse_expression(std::string_view text);

double eval_expression(const Expression& e, double x, double t);

// Node factories, used by the parser and by tests that build trees directly.
NodePtr make_number(double v);
NodePtr make_var(Variable v);
NodePtr make_pi();
NodePtr make_negate(NodePtr operand);
NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs);
NodePtr make_call(Function fn, NodePtr arg);

bool equal(const Node& a, const Node& b);
std::string to_string(const Node& n);

}  // namespace dampwave::expr
