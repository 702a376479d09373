#pragma once

// Immutable scalar expression trees: parsing, printing, evaluation,
// symbolic differentiation and light simplification.
//
// Grammar (highest precedence first):
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
//   power   := primary ('^' unary)?          right associative
//   unary   := '-' unary | power
//   term    := unary (('*' | '/') unary)*
//   expr    := term (('+' | '-') term)*

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "jetgeom/errors.hpp"

namespace jetgeom {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Tan, Atan, Exp, Ln, Sqrt, Tanh, Abs };

using Env = std::map<std::string, double, std::less<>>;

struct ExprNode;

class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(std::string name);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr negate(Expr child);
  static Expr call(Function fn, Expr arg);

  const ExprNode& node() const noexcept { return *node_; }

  bool is_constant() const noexcept;
  /// True when this is a Constant node holding exactly `value`.
  bool is_constant(double value) const noexcept;
  /// Value of a Constant node; precondition is_constant().
  double constant_value() const;

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(BinaryOp::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(BinaryOp::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(BinaryOp::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(BinaryOp::Div, a, b); }
  friend Expr operator-(const Expr& a) { return negate(a); }

  /// Structural equality (same tree shape, same names, bit-equal constants).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ConstantNode {
  double value;
};
struct VariableNode {
  std::string name;
};
struct BinaryNode {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
struct NegateNode {
  Expr child;
};
struct CallNode {
  Function fn;
  Expr arg;
};

struct ExprNode {
  std::variant<ConstantNode, VariableNode, BinaryNode, NegateNode, CallNode> value;
};

bool is_identifier(std::string_view name) noexcept;
std::string_view function_name(Function fn) noexcept;

Expr parse(std::string_view text);

/// Prints with the minimal parentheses needed for parse(to_string(e)) to
/// rebuild the same tree. Constants use 17 significant digits.
std::string to_string(const Expr& e);

double evaluate(const Expr& e, const Env& env);

/// Symbolic partial derivative, returned simplified.
Expr differentiate(const Expr& e, std::string_view var);

/// Constant folding and identity elimination (e+0, e*1, e*0, e^1, ...).
Expr simplify(const Expr& e);

std::set<std::string> free_variables(const Expr& e);

bool depends_on(const Expr& e, std::string_view var);

/// Replaces every occurrence of Var(name) with `replacement`.
Expr substitute(const Expr& e, std::string_view name, const Expr& replacement);

/// Expression compiled to a postfix program over a fixed list of variable
/// slots. Evaluation allocates nothing for shallow trees and follows the
/// same error rules as evaluate().
class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// Throws EvalError if `e` has a free variable missing from `slots`.
  CompiledExpr(const Expr& e, std::span<const std::string> slots);

  double operator()(std::span<const double> values) const;

 private:
  struct Instruction {
    enum class Kind : unsigned char { Constant, Load, Binary, Negate, Call } kind;
    BinaryOp op{};
    Function fn{};
    std::size_t slot = 0;
    double value = 0.0;
  };
  void emit(const Expr& e, std::span<const std::string> slots, std::size_t& depth);

  std::vector<Instruction> program_;
  std::size_t max_depth_ = 0;
};

}  // namespace jetgeom
