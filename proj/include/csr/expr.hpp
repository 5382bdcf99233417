#ifndef CSR_EXPR_HPP
#define CSR_EXPR_HPP

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

// Scalar expressions in the chart variables (x, y, t): parsing, printing,
// evaluation and exact symbolic differentiation. Expressions are immutable
// trees; all operations are safe to call concurrently.

namespace csr {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

// Thrown by the parser; `offset` is the byte position in the input text.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg), offset(off) {}
    std::size_t offset = 0;
};

// Thrown when an evaluation leaves the declared domain (division by zero,
// log of a non-positive value, sqrt of a negative value, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Var : int { X = 0, Y = 1, T = 2 };

enum class UnaryOp : int { Neg, Sin, Cos, Exp, Log, Sqrt };
enum class BinaryOp : int { Add, Sub, Mul, Div, Pow };

class Expression {
public:
    Expression() = default;  // empty; evaluating throws

    static Expression constant(double v);
    static Expression variable(Var v);
    static Expression unary(UnaryOp op, Expression a);
    // Pow requires a constant right operand (keeps derivatives closed-form).
    static Expression binary(BinaryOp op, Expression a, Expression b);

    bool empty() const { return root_ == nullptr; }
    bool is_constant() const;
    double constant_value() const;  // pre: is_constant()

    double evaluate(const Point3& p) const;
    Expression derivative(Var v) const;
    std::string print() const;

    friend bool structurally_equal(const Expression& a, const Expression& b);

    Expression operator-() const { return unary(UnaryOp::Neg, *this); }
    friend Expression operator+(Expression a, Expression b) {
        return binary(BinaryOp::Add, std::move(a), std::move(b));
    }
    friend Expression operator-(Expression a, Expression b) {
        return binary(BinaryOp::Sub, std::move(a), std::move(b));
    }
    friend Expression operator*(Expression a, Expression b) {
        return binary(BinaryOp::Mul, std::move(a), std::move(b));
    }
    friend Expression operator/(Expression a, Expression b) {
        return binary(BinaryOp::Div, std::move(a), std::move(b));
    }

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    explicit Expression(NodePtr n) : root_(std::move(n)) {}
    const NodePtr& root() const { return root_; }

private:
    NodePtr root_;
};

Expression parse_expression(const std::string& text);

// Replaces every occurrence of `var` by `replacement`.
Expression substitute(const Expression& e, Var var, const Expression& replacement);

inline Expression pow(Expression base, double exponent) {
    return Expression::binary(BinaryOp::Pow, std::move(base),
                              Expression::constant(exponent));
}
inline Expression sin(Expression a) { return Expression::unary(UnaryOp::Sin, std::move(a)); }
inline Expression cos(Expression a) { return Expression::unary(UnaryOp::Cos, std::move(a)); }
inline Expression exp(Expression a) { return Expression::unary(UnaryOp::Exp, std::move(a)); }
inline Expression log(Expression a) { return Expression::unary(UnaryOp::Log, std::move(a)); }
inline Expression sqrt(Expression a) { return Expression::unary(UnaryOp::Sqrt, std::move(a)); }

// Flat postfix program compiled from an expression tree. Evaluation walks a
// value stack instead of the tree; used in quadrature/assembly inner loops.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expression& e);

    double evaluate(const Point3& p) const;
    bool empty() const { return code_.empty(); }

private:
    struct Instr {
        int op;        // 0 = const, 1 = var, 2 = unary, 3 = binary
        int sub;       // UnaryOp/BinaryOp/Var index
        double value;  // constant payload
    };
    std::vector<Instr> code_;
    std::size_t stack_need_ = 0;
};

// An expression bundled with its three symbolic partial derivatives.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(Expression e);
    static ScalarField parse(const std::string& text) {
        return ScalarField(parse_expression(text));
    }
    static ScalarField constant(double v) {
        return ScalarField(Expression::constant(v));
    }

    double operator()(const Point3& p) const { return value_.evaluate(p); }
    double dx(const Point3& p) const { return grad_[0].evaluate(p); }
    double dy(const Point3& p) const { return grad_[1].evaluate(p); }
    double dt(const Point3& p) const { return grad_[2].evaluate(p); }
    std::array<double, 3> gradient(const Point3& p) const {
        return {dx(p), dy(p), dt(p)};
    }

    const Expression& expression() const { return expr_; }
    const Expression& partial(Var v) const { return grad_expr_[static_cast<int>(v)]; }
    bool empty() const { return expr_.empty(); }

private:
    Expression expr_;
    std::array<Expression, 3> grad_expr_;
    CompiledExpr value_;
    std::array<CompiledExpr, 3> grad_;
};

}  // namespace csr

#endif
