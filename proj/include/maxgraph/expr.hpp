#pragma once

#include "maxgraph/types.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace maxgraph::expr {

enum class Op { Constant, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Function };

enum class Func { Sin, Cos, Exp, Log, Sqrt, Atan, Asinh, Abs };

std::string_view function_name(Func f);

struct Node;
struct NodeAccess;

/// Immutable expression tree over the variables of a planar point.
///
/// Nodes are shared and never mutated, so an Expr can be copied freely and
/// evaluated from many threads at once.
class Expr {
public:
    /// The zero constant.
    Expr();

    static Expr constant(double value);
    /// Variable bound to coordinate `slot` of the evaluation point; `name` is
    /// used for printing only.
    static Expr variable(int slot, std::string name);

    static Expr negate(Expr a);
    static Expr add(Expr a, Expr b);
    static Expr subtract(Expr a, Expr b);
    static Expr multiply(Expr a, Expr b);
    static Expr divide(Expr a, Expr b);
    static Expr power(Expr base, Expr exponent);
    static Expr apply(Func f, Expr arg);

    Op op() const;
    double constant_value() const;  // Constant nodes only
    int slot() const;               // Variable nodes only
    const std::string& name() const;
    Func func() const;              // Function nodes only
    const Expr& lhs() const;        // unary operand or left operand
    const Expr& rhs() const;        // right operand of binary nodes

    bool is_constant() const { return op() == Op::Constant; }
    bool is_constant(double v) const { return is_constant() && constant_value() == v; }
    bool depends_on(int slot) const;
    std::size_t size() const;

    /// IEEE-double evaluation. Throws DomainError naming the offending
    /// subexpression for log/sqrt of negatives, division by zero, a
    /// non-integer power of a negative base, or a non-finite result.
    double eval(const Point& p) const;
    double eval(double s) const { return eval(Point(s, 0.0)); }

    /// Text that parses back to an evaluation-equivalent tree.
    std::string to_string() const;

    bool same_node(const Expr& other) const { return node_ == other.node_; }

private:
    friend struct NodeAccess;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// Syntax error at a byte offset of the source text.
class ParseError : public Error {
public:
    enum class Kind { Syntax, UnknownIdentifier };

    ParseError(Kind kind, std::size_t offset, std::string message);

    Kind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }
    const std::string& detail() const { return detail_; }

private:
    Kind kind_;
    std::size_t offset_;
    std::string detail_;
};

/// Variable names accepted by the parser, bound to point slots 0, 1, ...
struct VariableSet {
    std::vector<std::string> names{"x1", "x2"};

    static VariableSet planar() { return {}; }
    static VariableSet curve_parameter() { return VariableSet{{"s"}}; }
};

/// Parses an expression. Precedence, tightest first: `^` (right
/// associative), unary minus, `*` `/`, `+` `-`. Constants `pi` and `e`;
/// functions sin, cos, exp, log, sqrt, atan, asinh, abs.
Expr parse(std::string_view source, const VariableSet& vars = VariableSet::planar());

/// Exact symbolic derivative with respect to the variable in `slot`.
Expr differentiate(const Expr& e, int slot);
inline Expr differentiate(const Expr& e, Var v) { return differentiate(e, index(v)); }

/// Constant folding and 0/1 identities only; the result evaluates like the input.
Expr simplify(const Expr& e);

}  // namespace maxgraph::expr
