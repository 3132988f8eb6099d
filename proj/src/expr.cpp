#include "maxgraph/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>

namespace maxgraph {

std::string format_point(const Point& p) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", p.x(), p.y());
    return buf;
}

}  // namespace maxgraph

namespace maxgraph::expr {

struct NodeAccess {
    static Expr wrap(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }
    static const Node& node(const Expr& e) { return *e.node_; }
};

struct Node {
    Op op = Op::Constant;
    double value = 0.0;
    int slot = -1;
    std::string name;
    Func func = Func::Sin;
    // Leaves hold empty children; a default Expr here would recurse into
    // the shared zero node.
    Expr a = NodeAccess::wrap(nullptr);
    Expr b = NodeAccess::wrap(nullptr);
};

namespace {

Expr make(Op op, Expr a = {}, Expr b = {}) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return NodeAccess::wrap(std::move(n));
}

}  // namespace

std::string_view function_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Atan: return "atan";
        case Func::Asinh: return "asinh";
        case Func::Abs: return "abs";
    }
    return "?";
}

Expr::Expr() : node_([] {
    static const auto zero = std::make_shared<const Node>();
    return zero;
}()) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
    auto n = std::make_shared<Node>();
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(int slot, std::string name) {
    auto n = std::make_shared<Node>();
    n->op = Op::Variable;
    n->slot = slot;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::negate(Expr a) { return make(Op::Negate, std::move(a)); }
Expr Expr::add(Expr a, Expr b) { return make(Op::Add, std::move(a), std::move(b)); }
Expr Expr::subtract(Expr a, Expr b) { return make(Op::Subtract, std::move(a), std::move(b)); }
Expr Expr::multiply(Expr a, Expr b) { return make(Op::Multiply, std::move(a), std::move(b)); }
Expr Expr::divide(Expr a, Expr b) { return make(Op::Divide, std::move(a), std::move(b)); }
Expr Expr::power(Expr base, Expr exponent) {
    return make(Op::Power, std::move(base), std::move(exponent));
}

Expr Expr::apply(Func f, Expr arg) {
    auto n = std::make_shared<Node>();
    n->op = Op::Function;
    n->func = f;
    n->a = std::move(arg);
    return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::constant_value() const { return node_->value; }
int Expr::slot() const { return node_->slot; }
const std::string& Expr::name() const { return node_->name; }
Func Expr::func() const { return node_->func; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

namespace {

bool is_unary(Op op) { return op == Op::Negate || op == Op::Function; }
bool is_binary(Op op) {
    return op == Op::Add || op == Op::Subtract || op == Op::Multiply || op == Op::Divide ||
           op == Op::Power;
}

}  // namespace

bool Expr::depends_on(int s) const {
    switch (op()) {
        case Op::Constant: return false;
        case Op::Variable: return slot() == s;
        default: break;
    }
    if (is_unary(op())) return lhs().depends_on(s);
    return lhs().depends_on(s) || rhs().depends_on(s);
}

std::size_t Expr::size() const {
    if (is_unary(op())) return 1 + lhs().size();
    if (is_binary(op())) return 1 + lhs().size() + rhs().size();
    return 1;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

int precedence(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Subtract: return kPrecAdd;
        case Op::Multiply:
        case Op::Divide: return kPrecMul;
        case Op::Negate: return kPrecNeg;
        case Op::Power: return kPrecPow;
        case Op::Constant: return std::signbit(e.constant_value()) ? kPrecNeg : kPrecAtom;
        default: return kPrecAtom;
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
    switch (e.op()) {
        case Op::Constant: out += format_number(e.constant_value()); return;
        case Op::Variable: out += e.name(); return;
        case Op::Negate:
            out += '-';
            print_child(e.lhs(), precedence(e.lhs()) < kPrecNeg, out);
            return;
        case Op::Function:
            out += function_name(e.func());
            out += '(';
            print(e.lhs(), out);
            out += ')';
            return;
        case Op::Power:
            // Right-associative: parenthesize a power or anything looser on the left.
            print_child(e.lhs(), precedence(e.lhs()) <= kPrecPow, out);
            out += '^';
            print_child(e.rhs(), precedence(e.rhs()) < kPrecPow, out);
            return;
        default: break;
    }
    const int prec = precedence(e);
    const char* sym = e.op() == Op::Add        ? "+"
                      : e.op() == Op::Subtract ? "-"
                      : e.op() == Op::Multiply ? "*"
                                               : "/";
    print_child(e.lhs(), precedence(e.lhs()) < prec, out);
    out += sym;
    // Same-precedence right operands keep their grouping.
    print_child(e.rhs(), precedence(e.rhs()) <= prec, out);
}

}  // namespace

std::string Expr::to_string() const {
    std::string out;
    print(*this, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

[[noreturn]] void domain_error(const Expr& e, const Point& p, const char* what) {
    throw DomainError(std::string(what) + " in '" + e.to_string() + "' at " + format_point(p));
}

double eval_node(const Expr& e, const Point& p) {
    switch (e.op()) {
        case Op::Constant: return e.constant_value();
        case Op::Variable: return p[e.slot()];
        case Op::Negate: return -eval_node(e.lhs(), p);
        case Op::Add: return eval_node(e.lhs(), p) + eval_node(e.rhs(), p);
        case Op::Subtract: return eval_node(e.lhs(), p) - eval_node(e.rhs(), p);
        case Op::Multiply: return eval_node(e.lhs(), p) * eval_node(e.rhs(), p);
        case Op::Divide: {
            const double num = eval_node(e.lhs(), p);
            const double den = eval_node(e.rhs(), p);
            if (den == 0.0) domain_error(e, p, "division by zero");
            return num / den;
        }
        case Op::Power: {
            const double base = eval_node(e.lhs(), p);
            const double ex = eval_node(e.rhs(), p);
            const bool integral = std::nearbyint(ex) == ex;
            if (!integral && base < 0.0) domain_error(e, p, "non-integer power of a negative base");
            if (base == 0.0 && ex < 0.0) domain_error(e, p, "division by zero");
            const double r = std::pow(base, ex);
            if (!std::isfinite(r)) domain_error(e, p, "non-finite power");
            return r;
        }
        case Op::Function: {
            const double x = eval_node(e.lhs(), p);
            switch (e.func()) {
                case Func::Sin: return std::sin(x);
                case Func::Cos: return std::cos(x);
                case Func::Exp: {
                    const double r = std::exp(x);
                    if (!std::isfinite(r)) domain_error(e, p, "overflow");
                    return r;
                }
                case Func::Log:
                    if (!(x > 0.0)) domain_error(e, p, "log of non-positive argument");
                    return std::log(x);
                case Func::Sqrt:
                    if (x < 0.0) domain_error(e, p, "sqrt of negative argument");
                    return std::sqrt(x);
                case Func::Atan: return std::atan(x);
                case Func::Asinh: return std::asinh(x);
                case Func::Abs: return std::abs(x);
            }
        }
    }
    return 0.0;
}

}  // namespace

double Expr::eval(const Point& p) const {
    const double r = eval_node(*this, p);
    if (!std::isfinite(r)) domain_error(*this, p, "non-finite value");
    return r;
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(Kind kind, std::size_t offset, std::string message)
    : Error((kind == Kind::Syntax ? "syntax error at offset " : "unknown identifier at offset ") +
            std::to_string(offset) + ": " + message),
      kind_(kind),
      offset_(offset),
      detail_(std::move(message)) {}

namespace {

std::optional<Func> lookup_function(std::string_view name) {
    for (Func f : {Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt, Func::Atan, Func::Asinh,
                   Func::Abs}) {
        if (function_name(f) == name) return f;
    }
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view src, const VariableSet& vars) : src_(src), vars_(vars) {}

    Expr run() {
        skip_space();
        if (pos_ == src_.size()) syntax("expected expression");
        Expr e = parse_sum();
        skip_space();
        if (pos_ != src_.size()) syntax("expected operator or end of input");
        return e;
    }

private:
    [[noreturn]] void syntax(const std::string& msg) const {
        throw ParseError(ParseError::Kind::Syntax, pos_, msg);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum() {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::add(lhs, parse_product());
            } else if (accept('-')) {
                lhs = Expr::subtract(lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_product() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::multiply(lhs, parse_unary());
            } else if (accept('/')) {
                lhs = Expr::divide(lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::negate(parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return Expr::power(base, parse_unary());
        return base;
    }

    Expr parse_primary() {
        skip_space();
        if (pos_ == src_.size()) syntax("expected expression");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_sum();
            if (!accept(')')) syntax("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        syntax(std::string("expected expression, found '") + c + "'");
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            pos_ = start;
            syntax("malformed number");
        }
        // An exponent only when 'e' is followed by digits; otherwise `e` is the constant.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                digits();
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        return Expr::constant(std::strtod(text.c_str(), nullptr));
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        if (auto f = lookup_function(name)) {
            if (!accept('(')) syntax("expected '(' after function name '" + name + "'");
            Expr arg = parse_sum();
            if (!accept(')')) syntax("expected ')'");
            return Expr::apply(*f, arg);
        }
        for (std::size_t i = 0; i < vars_.names.size(); ++i) {
            if (vars_.names[i] == name) return Expr::variable(static_cast<int>(i), name);
        }
        if (name == "pi") return Expr::constant(std::numbers::pi);
        if (name == "e") return Expr::constant(std::numbers::e);
        throw ParseError(ParseError::Kind::UnknownIdentifier, start, "'" + name + "'");
    }

    std::string_view src_;
    const VariableSet& vars_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, const VariableSet& vars) {
    return Parser(source, vars).run();
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

std::optional<double> fold(const Expr& e) {
    try {
        const double v = e.eval(Point::Zero());
        if (std::isfinite(v)) return v;
    } catch (const DomainError&) {
    }
    return std::nullopt;
}

bool all_constant(const Expr& e) {
    if (e.op() == Op::Constant) return true;
    if (e.op() == Op::Variable) return false;
    if (is_unary(e.op())) return e.lhs().is_constant();
    return e.lhs().is_constant() && e.rhs().is_constant();
}

// Local rules for a node whose children are already simplified.
Expr simplify_node(const Expr& e) {
    if (e.op() == Op::Constant || e.op() == Op::Variable) return e;
    if (all_constant(e)) {
        if (auto v = fold(e)) return Expr::constant(*v);
        return e;
    }
    const Expr& a = e.lhs();
    const Expr& b = e.rhs();
    switch (e.op()) {
        case Op::Negate:
            if (a.op() == Op::Negate) return a.lhs();
            return e;
        case Op::Add:
            if (a.is_constant(0.0)) return b;
            if (b.is_constant(0.0)) return a;
            return e;
        case Op::Subtract:
            if (b.is_constant(0.0)) return a;
            if (a.is_constant(0.0)) return simplify_node(Expr::negate(b));
            return e;
        case Op::Multiply:
            if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
            if (a.is_constant(1.0)) return b;
            if (b.is_constant(1.0)) return a;
            if (a.is_constant(-1.0)) return simplify_node(Expr::negate(b));
            if (b.is_constant(-1.0)) return simplify_node(Expr::negate(a));
            return e;
        case Op::Divide:
            if (a.is_constant(0.0)) return Expr::constant(0.0);
            if (b.is_constant(1.0)) return a;
            return e;
        case Op::Power:
            if (b.is_constant(1.0)) return a;
            if (b.is_constant(0.0)) return Expr::constant(1.0);
            if (a.is_constant(1.0)) return Expr::constant(1.0);
            return e;
        default: return e;
    }
}

}  // namespace

Expr simplify(const Expr& e) {
    switch (e.op()) {
        case Op::Constant:
        case Op::Variable: return e;
        case Op::Negate: return simplify_node(Expr::negate(simplify(e.lhs())));
        case Op::Function: return simplify_node(Expr::apply(e.func(), simplify(e.lhs())));
        case Op::Add: return simplify_node(Expr::add(simplify(e.lhs()), simplify(e.rhs())));
        case Op::Subtract:
            return simplify_node(Expr::subtract(simplify(e.lhs()), simplify(e.rhs())));
        case Op::Multiply:
            return simplify_node(Expr::multiply(simplify(e.lhs()), simplify(e.rhs())));
        case Op::Divide: return simplify_node(Expr::divide(simplify(e.lhs()), simplify(e.rhs())));
        case Op::Power: return simplify_node(Expr::power(simplify(e.lhs()), simplify(e.rhs())));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr c(double v) { return Expr::constant(v); }
Expr neg(Expr a) { return simplify_node(Expr::negate(std::move(a))); }
Expr add(Expr a, Expr b) { return simplify_node(Expr::add(std::move(a), std::move(b))); }
Expr sub(Expr a, Expr b) { return simplify_node(Expr::subtract(std::move(a), std::move(b))); }
Expr mul(Expr a, Expr b) { return simplify_node(Expr::multiply(std::move(a), std::move(b))); }
Expr div(Expr a, Expr b) { return simplify_node(Expr::divide(std::move(a), std::move(b))); }
Expr pow(Expr a, Expr b) { return simplify_node(Expr::power(std::move(a), std::move(b))); }
Expr fn(Func f, Expr a) { return simplify_node(Expr::apply(f, std::move(a))); }

Expr derive(const Expr& e, int s) {
    if (!e.depends_on(s)) return c(0.0);
    const Expr& a = e.lhs();
    const Expr& b = e.rhs();
    switch (e.op()) {
        case Op::Constant: return c(0.0);
        case Op::Variable: return c(e.slot() == s ? 1.0 : 0.0);
        case Op::Negate: return neg(derive(a, s));
        case Op::Add: return add(derive(a, s), derive(b, s));
        case Op::Subtract: return sub(derive(a, s), derive(b, s));
        case Op::Multiply: return add(mul(derive(a, s), b), mul(a, derive(b, s)));
        case Op::Divide: {
            if (!b.depends_on(s)) return div(derive(a, s), b);
            // (a'b - ab') / b^2
            return div(sub(mul(derive(a, s), b), mul(a, derive(b, s))), pow(b, c(2.0)));
        }
        case Op::Power: {
            if (!b.depends_on(s)) {
                return mul(mul(b, pow(a, sub(b, c(1.0)))), derive(a, s));
            }
            // d(a^b) = a^b (b' log a + b a'/a)
            return mul(e, add(mul(derive(b, s), fn(Func::Log, a)), div(mul(b, derive(a, s)), a)));
        }
        case Op::Function: {
            const Expr da = derive(a, s);
            Expr outer;
            switch (e.func()) {
                case Func::Sin: outer = fn(Func::Cos, a); break;
                case Func::Cos: outer = neg(fn(Func::Sin, a)); break;
                case Func::Exp: outer = e; break;
                case Func::Log: return div(da, a);
                case Func::Sqrt: return div(da, mul(c(2.0), e));
                case Func::Atan: return div(da, add(c(1.0), pow(a, c(2.0))));
                case Func::Asinh: return div(da, fn(Func::Sqrt, add(pow(a, c(2.0)), c(1.0))));
                // Undefined at 0; the division surfaces that as an eval-time domain error.
                case Func::Abs: return mul(div(a, e), da);
            }
            return mul(outer, da);
        }
    }
    return c(0.0);
}

}  // namespace

Expr differentiate(const Expr& e, int slot) { return derive(e, slot); }

}  // namespace maxgraph::expr
