#include "csr/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace csr {

struct Expression::Node {
    enum class Kind { Const, Variable, Unary, Binary } kind;
    double value = 0.0;  // Const
    Var var = Var::X;    // Variable
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Const;
    n->value = v;
    return n;
}

NodePtr make_var(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    n->var = v;
    return n;
}

bool is_const(const NodePtr& n, double v) {
    return n->kind == Node::Kind::Const && n->value == v;
}

double eval_unary(UnaryOp op, double a) {
    switch (op) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Sin: return std::sin(a);
        case UnaryOp::Cos: return std::cos(a);
        case UnaryOp::Exp: {
            double r = std::exp(a);
            if (!std::isfinite(r)) throw DomainError("exp overflow");
            return r;
        }
        case UnaryOp::Log:
            if (a <= 0.0) throw DomainError("log of non-positive value");
            return std::log(a);
        case UnaryOp::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(a);
    }
    throw std::logic_error("bad unary op");
}

double eval_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
            if (b == 0.0) throw DomainError("division by zero");
            return a / b;
        case BinaryOp::Pow: {
            if (a < 0.0 && b != std::floor(b))
                throw DomainError("fractional power of negative base");
            if (a == 0.0 && b < 0.0) throw DomainError("zero base with negative exponent");
            double r = std::pow(a, b);
            if (!std::isfinite(r)) throw DomainError("pow overflow");
            return r;
        }
    }
    throw std::logic_error("bad binary op");
}

NodePtr make_unary(UnaryOp op, NodePtr a) {
    if (a->kind == Node::Kind::Const) return make_const(eval_unary(op, a->value));
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->uop = op;
    n->a = std::move(a);
    return n;
}

// Folds constants and the neutral elements that show up constantly in
// machine-generated derivative trees. Division keeps 0/u unfolded so that a
// zero denominator still reports a domain error.
NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
    if (op == BinaryOp::Pow && b->kind != Node::Kind::Const)
        throw ParseError("exponent must be a constant", 0);
    if (a->kind == Node::Kind::Const && b->kind == Node::Kind::Const)
        return make_const(eval_binary(op, a->value, b->value));
    switch (op) {
        case BinaryOp::Add:
            if (is_const(a, 0.0)) return b;
            if (is_const(b, 0.0)) return a;
            break;
        case BinaryOp::Sub:
            if (is_const(b, 0.0)) return a;
            if (is_const(a, 0.0)) return make_unary(UnaryOp::Neg, std::move(b));
            break;
        case BinaryOp::Mul:
            if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
            if (is_const(a, 1.0)) return b;
            if (is_const(b, 1.0)) return a;
            break;
        case BinaryOp::Div:
            if (is_const(b, 1.0)) return a;
            break;
        case BinaryOp::Pow:
            if (is_const(b, 0.0)) return make_const(1.0);
            if (is_const(b, 1.0)) return a;
            break;
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->bop = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

double eval_node(const Node& n, const Point3& p) {
    switch (n.kind) {
        case Node::Kind::Const: return n.value;
        case Node::Kind::Variable:
            switch (n.var) {
                case Var::X: return p.x;
                case Var::Y: return p.y;
                case Var::T: return p.t;
            }
            break;
        case Node::Kind::Unary: return eval_unary(n.uop, eval_node(*n.a, p));
        case Node::Kind::Binary:
            return eval_binary(n.bop, eval_node(*n.a, p), eval_node(*n.b, p));
    }
    throw std::logic_error("bad node");
}

NodePtr diff_node(const NodePtr& n, Var v);

NodePtr diff_unary(const NodePtr& n, Var v) {
    NodePtr da = diff_node(n->a, v);
    switch (n->uop) {
        case UnaryOp::Neg: return make_unary(UnaryOp::Neg, da);
        case UnaryOp::Sin:
            return make_binary(BinaryOp::Mul, make_unary(UnaryOp::Cos, n->a), da);
        case UnaryOp::Cos:
            return make_unary(UnaryOp::Neg,
                              make_binary(BinaryOp::Mul, make_unary(UnaryOp::Sin, n->a), da));
        case UnaryOp::Exp:
            return make_binary(BinaryOp::Mul, make_unary(UnaryOp::Exp, n->a), da);
        case UnaryOp::Log: return make_binary(BinaryOp::Div, da, n->a);
        case UnaryOp::Sqrt:
            return make_binary(
                BinaryOp::Div, da,
                make_binary(BinaryOp::Mul, make_const(2.0), make_unary(UnaryOp::Sqrt, n->a)));
    }
    throw std::logic_error("bad unary op");
}

NodePtr diff_node(const NodePtr& n, Var v) {
    switch (n->kind) {
        case Node::Kind::Const: return make_const(0.0);
        case Node::Kind::Variable: return make_const(n->var == v ? 1.0 : 0.0);
        case Node::Kind::Unary: return diff_unary(n, v);
        case Node::Kind::Binary: {
            NodePtr da = diff_node(n->a, v);
            switch (n->bop) {
                case BinaryOp::Add: return make_binary(BinaryOp::Add, da, diff_node(n->b, v));
                case BinaryOp::Sub: return make_binary(BinaryOp::Sub, da, diff_node(n->b, v));
                case BinaryOp::Mul: {
                    NodePtr db = diff_node(n->b, v);
                    return make_binary(BinaryOp::Add, make_binary(BinaryOp::Mul, da, n->b),
                                       make_binary(BinaryOp::Mul, n->a, db));
                }
                case BinaryOp::Div: {
                    NodePtr db = diff_node(n->b, v);
                    NodePtr num = make_binary(BinaryOp::Sub, make_binary(BinaryOp::Mul, da, n->b),
                                              make_binary(BinaryOp::Mul, n->a, db));
                    NodePtr den = make_binary(BinaryOp::Mul, n->b, n->b);
                    return make_binary(BinaryOp::Div, num, den);
                }
                case BinaryOp::Pow: {
                    // d(u^c) = c * u^(c-1) * u'
                    double c = n->b->value;
                    NodePtr body = make_binary(BinaryOp::Pow, n->a, make_const(c - 1.0));
                    return make_binary(BinaryOp::Mul, make_const(c),
                                       make_binary(BinaryOp::Mul, body, da));
                }
            }
        }
    }
    throw std::logic_error("bad node");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "-";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Log: return "log";
        case UnaryOp::Sqrt: return "sqrt";
    }
    return "?";
}

// Precedence: add/sub 1, mul/div 2, unary minus 3, pow 4, atoms 5.
int precedence(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Const: return n.value < 0 ? 3 : 5;
        case Node::Kind::Variable: return 5;
        case Node::Kind::Unary: return n.uop == UnaryOp::Neg ? 3 : 5;
        case Node::Kind::Binary:
            switch (n.bop) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
    }
    return 5;
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int parent_prec, bool needs_strict, std::string& out) {
    int cp = precedence(child);
    bool paren = needs_strict ? (cp <= parent_prec) : (cp < parent_prec);
    if (paren) out += '(';
    print_node(child, out);
    if (paren) out += ')';
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Node::Kind::Const: out += format_double(n.value); return;
        case Node::Kind::Variable:
            out += (n.var == Var::X ? 'x' : n.var == Var::Y ? 'y' : 't');
            return;
        case Node::Kind::Unary:
            if (n.uop == UnaryOp::Neg) {
                out += '-';
                print_child(*n.a, 3, true, out);
            } else {
                out += unary_name(n.uop);
                out += '(';
                print_node(*n.a, out);
                out += ')';
            }
            return;
        case Node::Kind::Binary: {
            int prec = precedence(n);
            const char* ops;
            bool strict_rhs = false;
            switch (n.bop) {
                case BinaryOp::Add: ops = " + "; break;
                case BinaryOp::Sub: ops = " - "; strict_rhs = true; break;
                case BinaryOp::Mul: ops = "*"; break;
                case BinaryOp::Div: ops = "/"; strict_rhs = true; break;
                case BinaryOp::Pow: ops = "^"; strict_rhs = true; break;
            }
            print_child(*n.a, prec, n.bop == BinaryOp::Pow, out);
            out += ops;
            print_child(*n.b, prec, strict_rhs, out);
            return;
        }
    }
}

bool equal_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Const: return a.value == b.value;
        case Node::Kind::Variable: return a.var == b.var;
        case Node::Kind::Unary: return a.uop == b.uop && equal_nodes(*a.a, *b.a);
        case Node::Kind::Binary:
            return a.bop == b.bop && equal_nodes(*a.a, *b.a) && equal_nodes(*a.b, *b.b);
    }
    return false;
}

// Recursive-descent parser with byte offsets.
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := primary ('^' factor)?      (exponent must fold to a constant)
//   primary:= number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr e = parse_term();
        for (;;) {
            if (eat('+')) e = make_binary(BinaryOp::Add, e, parse_term());
            else if (eat('-')) e = make_binary(BinaryOp::Sub, e, parse_term());
            else return e;
        }
    }

    NodePtr parse_term() {
        NodePtr e = parse_factor();
        for (;;) {
            if (eat('*')) e = make_binary(BinaryOp::Mul, e, parse_factor());
            else if (eat('/')) e = make_binary(BinaryOp::Div, e, parse_factor());
            else return e;
        }
    }

    NodePtr parse_factor() {
        if (eat('-')) return make_unary(UnaryOp::Neg, parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (eat('^')) {
            skip_ws();
            std::size_t at = pos_;
            NodePtr e = parse_factor();
            if (e->kind != Node::Kind::Const)
                throw ParseError("exponent must be a constant", at);
            return make_binary(BinaryOp::Pow, base, e);
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail("expected operand");
    }

    NodePtr parse_number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("invalid number");
        pos_ += static_cast<std::size_t>(end - begin);
        return make_const(v);
    }

    NodePtr parse_ident() {
        std::size_t at = pos_;
        std::string name;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            name += s_[pos_++];
        if (name == "x") return make_var(Var::X);
        if (name == "y") return make_var(Var::Y);
        if (name == "t") return make_var(Var::T);
        if (name == "pi") return make_const(3.14159265358979323846);
        UnaryOp op;
        if (name == "sin") op = UnaryOp::Sin;
        else if (name == "cos") op = UnaryOp::Cos;
        else if (name == "exp") op = UnaryOp::Exp;
        else if (name == "log") op = UnaryOp::Log;
        else if (name == "sqrt") op = UnaryOp::Sqrt;
        else throw ParseError("unknown identifier '" + name + "'", at);
        if (!eat('(')) fail("expected '(' after function name");
        NodePtr arg = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return make_unary(op, arg);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::constant(double v) { return Expression(make_const(v)); }
Expression Expression::variable(Var v) { return Expression(make_var(v)); }

Expression Expression::unary(UnaryOp op, Expression a) {
    return Expression(make_unary(op, a.root_));
}

Expression Expression::binary(BinaryOp op, Expression a, Expression b) {
    return Expression(make_binary(op, a.root_, b.root_));
}

bool Expression::is_constant() const {
    return root_ && root_->kind == Node::Kind::Const;
}

double Expression::constant_value() const {
    if (!is_constant()) throw std::logic_error("not a constant expression");
    return root_->value;
}

double Expression::evaluate(const Point3& p) const {
    if (!root_) throw std::logic_error("empty expression");
    return eval_node(*root_, p);
}

Expression Expression::derivative(Var v) const {
    if (!root_) throw std::logic_error("empty expression");
    return Expression(diff_node(root_, v));
}

std::string Expression::print() const {
    if (!root_) return "";
    std::string out;
    print_node(*root_, out);
    return out;
}

bool structurally_equal(const Expression& a, const Expression& b) {
    if (!a.root_ || !b.root_) return a.root_ == b.root_;
    return equal_nodes(*a.root_, *b.root_);
}

Expression parse_expression(const std::string& text) {
    if (text.empty()) throw ParseError("empty expression", 0);
    return Expression(Parser(text).parse());
}

namespace {

NodePtr substitute_node(const NodePtr& n, Var var, const NodePtr& repl) {
    switch (n->kind) {
        case Node::Kind::Const: return n;
        case Node::Kind::Variable: return n->var == var ? repl : n;
        case Node::Kind::Unary: return make_unary(n->uop, substitute_node(n->a, var, repl));
        case Node::Kind::Binary:
            return make_binary(n->bop, substitute_node(n->a, var, repl),
                               substitute_node(n->b, var, repl));
    }
    throw std::logic_error("bad node");
}

}  // namespace

Expression substitute(const Expression& e, Var var, const Expression& replacement) {
    if (e.empty() || replacement.empty()) throw std::logic_error("empty expression");
    return Expression(substitute_node(e.root(), var, replacement.root()));
}

CompiledExpr::CompiledExpr(const Expression& e) {
    if (e.empty()) return;
    // Post-order flatten.
    struct Frame {
        const Expression::Node* n;
        int stage;
    };
    std::vector<Frame> stack{{e.root().get(), 0}};
    std::size_t depth = 0, max_depth = 0;
    while (!stack.empty()) {
        Frame& f = stack.back();
        const Expression::Node* n = f.n;
        switch (n->kind) {
            case Expression::Node::Kind::Const:
                code_.push_back({0, 0, n->value});
                ++depth;
                stack.pop_back();
                break;
            case Expression::Node::Kind::Variable:
                code_.push_back({1, static_cast<int>(n->var), 0.0});
                ++depth;
                stack.pop_back();
                break;
            case Expression::Node::Kind::Unary:
                if (f.stage == 0) {
                    f.stage = 1;
                    stack.push_back({n->a.get(), 0});
                } else {
                    code_.push_back({2, static_cast<int>(n->uop), 0.0});
                    stack.pop_back();
                }
                break;
            case Expression::Node::Kind::Binary:
                if (f.stage == 0) {
                    f.stage = 1;
                    stack.push_back({n->a.get(), 0});
                } else if (f.stage == 1) {
                    f.stage = 2;
                    stack.push_back({n->b.get(), 0});
                } else {
                    code_.push_back({3, static_cast<int>(n->bop), 0.0});
                    --depth;
                    stack.pop_back();
                }
                break;
        }
        max_depth = std::max(max_depth, depth);
    }
    stack_need_ = max_depth + 2;
}

double CompiledExpr::evaluate(const Point3& p) const {
    if (code_.empty()) throw std::logic_error("empty compiled expression");
    double fixed[64];
    std::vector<double> dynamic;
    double* st = fixed;
    if (stack_need_ > 64) {
        dynamic.resize(stack_need_);
        st = dynamic.data();
    }
    std::size_t top = 0;
    const double vars[3] = {p.x, p.y, p.t};
    for (const Instr& ins : code_) {
        switch (ins.op) {
            case 0: st[top++] = ins.value; break;
            case 1: st[top++] = vars[ins.sub]; break;
            case 2: st[top - 1] = eval_unary(static_cast<UnaryOp>(ins.sub), st[top - 1]); break;
            case 3:
                st[top - 2] =
                    eval_binary(static_cast<BinaryOp>(ins.sub), st[top - 2], st[top - 1]);
                --top;
                break;
        }
    }
    return st[0];
}

ScalarField::ScalarField(Expression e) : expr_(std::move(e)) {
    grad_expr_ = {expr_.derivative(Var::X), expr_.derivative(Var::Y),
                  expr_.derivative(Var::T)};
    value_ = CompiledExpr(expr_);
    for (int i = 0; i < 3; ++i) grad_[i] = CompiledExpr(grad_expr_[i]);
}

}  // namespace csr
