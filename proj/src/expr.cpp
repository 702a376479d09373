#include "jetgeom/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

namespace jetgeom {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"atan", Function::Atan},
    {"exp", Function::Exp},
    {"ln", Function::Ln},
    {"sqrt", Function::Sqrt},
    {"tanh", Function::Tanh},
    {"abs", Function::Abs},
}};

std::optional<Function> lookup_function(std::string_view name) {
  for (const auto& [fname, fn] : kFunctions) {
    if (fname == name) return fn;
  }
  return std::nullopt;
}

std::string_view op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
  }
  return "?";
}

double checked(double value, std::string_view what) {
  if (!std::isfinite(value)) {
    throw EvalError("non-finite result of " + std::string(what));
  }
  return value;
}

double apply_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::Add: return checked(a + b, "addition");
    case BinaryOp::Sub: return checked(a - b, "subtraction");
    case BinaryOp::Mul: return checked(a * b, "multiplication");
    case BinaryOp::Div:
      if (b == 0.0) throw EvalError("division by zero");
      return checked(a / b, "division");
    case BinaryOp::Pow:
      if (a < 0.0 && std::trunc(b) != b) {
        throw EvalError("negative base raised to a non-integer exponent");
      }
      return checked(std::pow(a, b), "power");
  }
  throw EvalError("unknown binary operator");
}

double apply_function(Function fn, double x) {
  switch (fn) {
    case Function::Sin: return checked(std::sin(x), "sin");
    case Function::Cos: return checked(std::cos(x), "cos");
    case Function::Tan: return checked(std::tan(x), "tan");
    case Function::Atan: return checked(std::atan(x), "atan");
    case Function::Exp: return checked(std::exp(x), "exp");
    case Function::Ln:
      if (x <= 0.0) throw EvalError("ln of non-positive value");
      return checked(std::log(x), "ln");
    case Function::Sqrt:
      if (x < 0.0) throw EvalError("sqrt of negative value");
      return checked(std::sqrt(x), "sqrt");
    case Function::Tanh: return checked(std::tanh(x), "tanh");
    case Function::Abs: return std::fabs(x);
  }
  throw EvalError("unknown function");
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("expected operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

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

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (!accept('-')) return parse_power();
    // A minus sign written directly before a numeric literal is part of the
    // literal, so printed negative constants read back as constants.
    skip_space();
    const bool literal =
        pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
    Expr operand = parse_unary();
    if (literal && operand.is_constant()) return Expr::constant(-operand.constant_value());
    return Expr::negate(operand);
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(BinaryOp::Pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected number, identifier or '(' but found end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        const auto fn = lookup_function(name);
        if (!fn) throw ParseError(start, "unknown function '" + std::string(name) + "'");
        ++pos_;
        Expr arg = parse_expr();
        if (!accept(')')) fail("expected ')' after function argument");
        return Expr::call(*fn, arg);
      }
      return Expr::variable(std::string(name));
    }
    fail(std::string("expected number, identifier or '(' but found '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError(start, "malformed number");
    return Expr::constant(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

int precedence(const Expr& e) {
  return std::visit(Overloaded{
                        [](const ConstantNode& c) { return std::signbit(c.value) ? 3 : 5; },
                        [](const VariableNode&) { return 5; },
                        [](const CallNode&) { return 5; },
                        [](const NegateNode&) { return 3; },
                        [](const BinaryNode& b) {
                          switch (b.op) {
                            case BinaryOp::Add:
                            case BinaryOp::Sub: return 1;
                            case BinaryOp::Mul:
                            case BinaryOp::Div: return 2;
                            case BinaryOp::Pow: return 4;
                          }
                          return 0;
                        },
                    },
                    e.node().value);
}

std::string format_constant(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void print(const Expr& e, std::string& out) {
  auto wrapped = [&out](const Expr& child, bool parens) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
  };
  std::visit(Overloaded{
                 [&](const ConstantNode& c) { out += format_constant(c.value); },
                 [&](const VariableNode& v) { out += v.name; },
                 [&](const CallNode& c) {
                   out += function_name(c.fn);
                   wrapped(c.arg, true);
                 },
                 [&](const NegateNode& n) {
                   out += '-';
                   wrapped(n.child, n.child.is_constant() || precedence(n.child) < 3);
                 },
                 [&](const BinaryNode& b) {
                   const int p = precedence(e);
                   if (b.op == BinaryOp::Pow) {
                     wrapped(b.lhs, precedence(b.lhs) <= 4);
                     out += '^';
                     wrapped(b.rhs, precedence(b.rhs) < 3);
                   } else {
                     wrapped(b.lhs, precedence(b.lhs) < p);
                     out += op_symbol(b.op);
                     wrapped(b.rhs, precedence(b.rhs) <= p);
                   }
                 },
             },
             e.node().value);
}

// ---------------------------------------------------------------------------
// Simplification helpers, used by differentiate as well.

Expr make_add(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (a.is_constant() && b.is_constant()) {
    const double v = a.constant_value() + b.constant_value();
    if (std::isfinite(v)) return Expr::constant(v);
  }
  return a + b;
}

Expr make_neg(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.constant_value());
  if (const auto* n = std::get_if<NegateNode>(&a.node().value)) return n->child;
  return -a;
}

Expr make_sub(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return make_neg(b);
  if (a.is_constant() && b.is_constant()) {
    const double v = a.constant_value() - b.constant_value();
    if (std::isfinite(v)) return Expr::constant(v);
  }
  return a - b;
}

Expr make_mul(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return make_neg(b);
  if (b.is_constant(-1.0)) return make_neg(a);
  if (a.is_constant() && b.is_constant()) {
    const double v = a.constant_value() * b.constant_value();
    if (std::isfinite(v)) return Expr::constant(v);
  }
  return a * b;
}

Expr make_div(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant() && b.is_constant() && !b.is_constant(0.0)) {
    const double v = a.constant_value() / b.constant_value();
    if (std::isfinite(v)) return Expr::constant(v);
  }
  return a / b;
}

Expr make_pow(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(0.0)) return Expr::constant(1.0);
  if (a.is_constant(1.0)) return Expr::constant(1.0);
  if (a.is_constant() && b.is_constant()) {
    const double base = a.constant_value();
    const double exponent = b.constant_value();
    if (!(base < 0.0 && std::trunc(exponent) != exponent)) {
      const double v = std::pow(base, exponent);
      if (std::isfinite(v)) return Expr::constant(v);
    }
  }
  return Expr::binary(BinaryOp::Pow, a, b);
}

Expr make_call(Function fn, const Expr& arg) {
  if (arg.is_constant()) {
    try {
      return Expr::constant(apply_function(fn, arg.constant_value()));
    } catch (const EvalError&) {
      // leave unfolded; evaluation reports the error
    }
  }
  return Expr::call(fn, arg);
}

Expr make_binary(BinaryOp op, const Expr& a, const Expr& b) {
  switch (op) {
    case BinaryOp::Add: return make_add(a, b);
    case BinaryOp::Sub: return make_sub(a, b);
    case BinaryOp::Mul: return make_mul(a, b);
    case BinaryOp::Div: return make_div(a, b);
    case BinaryOp::Pow: return make_pow(a, b);
  }
  return Expr::binary(op, a, b);
}

Expr raw_derivative(const Expr& e, std::string_view var);

Expr derivative_of(const Expr& e, std::string_view var) {
  if (!depends_on(e, var)) return Expr::constant(0.0);
  return raw_derivative(e, var);
}

Expr raw_derivative(const Expr& e, std::string_view var) {
  return std::visit(
      Overloaded{
          [](const ConstantNode&) { return Expr::constant(0.0); },
          [&](const VariableNode& v) { return Expr::constant(v.name == var ? 1.0 : 0.0); },
          [&](const NegateNode& n) { return make_neg(derivative_of(n.child, var)); },
          [&](const BinaryNode& b) {
            const Expr& u = b.lhs;
            const Expr& v = b.rhs;
            switch (b.op) {
              case BinaryOp::Add: return make_add(derivative_of(u, var), derivative_of(v, var));
              case BinaryOp::Sub: return make_sub(derivative_of(u, var), derivative_of(v, var));
              case BinaryOp::Mul:
                return make_add(make_mul(derivative_of(u, var), v), make_mul(u, derivative_of(v, var)));
              case BinaryOp::Div:
                return make_div(
                    make_sub(make_mul(derivative_of(u, var), v), make_mul(u, derivative_of(v, var))),
                    make_pow(v, Expr::constant(2.0)));
              case BinaryOp::Pow: {
                const bool base_varies = depends_on(u, var);
                const bool exponent_varies = depends_on(v, var);
                if (!exponent_varies) {
                  // v * u^(v-1) * du
                  return make_mul(make_mul(v, make_pow(u, make_sub(v, Expr::constant(1.0)))),
                                  derivative_of(u, var));
                }
                const Expr log_u = make_call(Function::Ln, u);
                if (!base_varies) {
                  return make_mul(make_mul(e, log_u), derivative_of(v, var));
                }
                // u^v * (dv ln u + v du / u)
                return make_mul(e, make_add(make_mul(derivative_of(v, var), log_u),
                                            make_div(make_mul(v, derivative_of(u, var)), u)));
              }
            }
            return Expr::constant(0.0);
          },
          [&](const CallNode& c) {
            const Expr& u = c.arg;
            const Expr du = derivative_of(u, var);
            const Expr one = Expr::constant(1.0);
            const Expr two = Expr::constant(2.0);
            switch (c.fn) {
              case Function::Sin: return make_mul(make_call(Function::Cos, u), du);
              case Function::Cos: return make_neg(make_mul(make_call(Function::Sin, u), du));
              case Function::Tan: return make_mul(make_add(one, make_pow(e, two)), du);
              case Function::Atan: return make_div(du, make_add(one, make_pow(u, two)));
              case Function::Exp: return make_mul(e, du);
              case Function::Ln: return make_div(du, u);
              case Function::Sqrt: return make_div(du, make_mul(two, e));
              case Function::Tanh: return make_mul(make_sub(one, make_pow(e, two)), du);
              case Function::Abs: return make_mul(make_div(u, e), du);
            }
            return Expr::constant(0.0);
          },
      },
      e.node().value);
}

void collect_variables(const Expr& e, std::set<std::string>& out) {
  std::visit(Overloaded{
                 [](const ConstantNode&) {},
                 [&](const VariableNode& v) { out.insert(v.name); },
                 [&](const NegateNode& n) { collect_variables(n.child, out); },
                 [&](const CallNode& c) { collect_variables(c.arg, out); },
                 [&](const BinaryNode& b) {
                   collect_variables(b.lhs, out);
                   collect_variables(b.rhs, out);
                 },
             },
             e.node().value);
}

double eval_tree(const Expr& e, const Env& env) {
  return std::visit(Overloaded{
                        [](const ConstantNode& c) { return c.value; },
                        [&](const VariableNode& v) {
                          const auto it = env.find(v.name);
                          if (it == env.end()) throw EvalError("unbound variable '" + v.name + "'");
                          return it->second;
                        },
                        [&](const NegateNode& n) { return -eval_tree(n.child, env); },
                        [&](const CallNode& c) { return apply_function(c.fn, eval_tree(c.arg, env)); },
                        [&](const BinaryNode& b) {
                          const double lhs = eval_tree(b.lhs, env);
                          const double rhs = eval_tree(b.rhs, env);
                          return apply_binary(b.op, lhs, rhs);
                        },
                    },
                    e.node().value);
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{ConstantNode{value}}));
}

Expr Expr::variable(std::string name) {
  if (!is_identifier(name)) throw ValidationError("invalid identifier '" + name + "'");
  return Expr(std::make_shared<const ExprNode>(ExprNode{VariableNode{std::move(name)}}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, std::move(lhs), std::move(rhs)}}));
}

Expr Expr::negate(Expr child) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{NegateNode{std::move(child)}}));
}

Expr Expr::call(Function fn, Expr arg) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{CallNode{fn, std::move(arg)}}));
}

bool Expr::is_constant() const noexcept { return std::holds_alternative<ConstantNode>(node_->value); }

bool Expr::is_constant(double value) const noexcept {
  const auto* c = std::get_if<ConstantNode>(&node_->value);
  return c != nullptr && c->value == value;
}

double Expr::constant_value() const { return std::get<ConstantNode>(node_->value).value; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.node().value;
  const auto& y = b.node().value;
  if (x.index() != y.index()) return false;
  return std::visit(Overloaded{
                        [&](const ConstantNode& c) { return c.value == std::get<ConstantNode>(y).value; },
                        [&](const VariableNode& v) { return v.name == std::get<VariableNode>(y).name; },
                        [&](const NegateNode& n) { return n.child == std::get<NegateNode>(y).child; },
                        [&](const CallNode& c) {
                          const auto& o = std::get<CallNode>(y);
                          return c.fn == o.fn && c.arg == o.arg;
                        },
                        [&](const BinaryNode& bn) {
                          const auto& o = std::get<BinaryNode>(y);
                          return bn.op == o.op && bn.lhs == o.lhs && bn.rhs == o.rhs;
                        },
                    },
                    x);
}

// ---------------------------------------------------------------------------
// Free functions

bool is_identifier(std::string_view name) noexcept {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::string_view function_name(Function fn) noexcept {
  for (const auto& [name, f] : kFunctions) {
    if (f == fn) return name;
  }
  return "?";
}

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

double evaluate(const Expr& e, const Env& env) { return checked(eval_tree(e, env), "expression"); }

Expr differentiate(const Expr& e, std::string_view var) { return simplify(derivative_of(e, var)); }

Expr simplify(const Expr& e) {
  return std::visit(Overloaded{
                        [&](const ConstantNode&) { return e; },
                        [&](const VariableNode&) { return e; },
                        [&](const NegateNode& n) { return make_neg(simplify(n.child)); },
                        [&](const CallNode& c) { return make_call(c.fn, simplify(c.arg)); },
                        [&](const BinaryNode& b) { return make_binary(b.op, simplify(b.lhs), simplify(b.rhs)); },
                    },
                    e.node().value);
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view var) {
  return std::visit(Overloaded{
                        [](const ConstantNode&) { return false; },
                        [&](const VariableNode& v) { return v.name == var; },
                        [&](const NegateNode& n) { return depends_on(n.child, var); },
                        [&](const CallNode& c) { return depends_on(c.arg, var); },
                        [&](const BinaryNode& b) { return depends_on(b.lhs, var) || depends_on(b.rhs, var); },
                    },
                    e.node().value);
}

Expr substitute(const Expr& e, std::string_view name, const Expr& replacement) {
  if (!depends_on(e, name)) return e;
  return std::visit(Overloaded{
                        [&](const ConstantNode&) { return e; },
                        [&](const VariableNode&) { return replacement; },
                        [&](const NegateNode& n) { return Expr::negate(substitute(n.child, name, replacement)); },
                        [&](const CallNode& c) { return Expr::call(c.fn, substitute(c.arg, name, replacement)); },
                        [&](const BinaryNode& b) {
                          return Expr::binary(b.op, substitute(b.lhs, name, replacement),
                                              substitute(b.rhs, name, replacement));
                        },
                    },
                    e.node().value);
}

// ---------------------------------------------------------------------------
// CompiledExpr

CompiledExpr::CompiledExpr(const Expr& e, std::span<const std::string> slots) {
  std::size_t depth = 0;
  emit(e, slots, depth);
}

void CompiledExpr::emit(const Expr& e, std::span<const std::string> slots, std::size_t& depth) {
  auto push = [&](Instruction ins) {
    program_.push_back(ins);
  };
  std::visit(Overloaded{
                 [&](const ConstantNode& c) {
                   push({Instruction::Kind::Constant, {}, {}, 0, c.value});
                   max_depth_ = std::max(max_depth_, ++depth);
                 },
                 [&](const VariableNode& v) {
                   std::size_t slot = 0;
                   while (slot < slots.size() && slots[slot] != v.name) ++slot;
                   if (slot == slots.size()) throw EvalError("unbound variable '" + v.name + "'");
                   push({Instruction::Kind::Load, {}, {}, slot, 0.0});
                   max_depth_ = std::max(max_depth_, ++depth);
                 },
                 [&](const NegateNode& n) {
                   emit(n.child, slots, depth);
                   push({Instruction::Kind::Negate, {}, {}, 0, 0.0});
                 },
                 [&](const CallNode& c) {
                   emit(c.arg, slots, depth);
                   push({Instruction::Kind::Call, {}, c.fn, 0, 0.0});
                 },
                 [&](const BinaryNode& b) {
                   emit(b.lhs, slots, depth);
                   emit(b.rhs, slots, depth);
                   push({Instruction::Kind::Binary, b.op, {}, 0, 0.0});
                   --depth;
                 },
             },
             e.node().value);
}

double CompiledExpr::operator()(std::span<const double> values) const {
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack;
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const Instruction& ins : program_) {
    switch (ins.kind) {
      case Instruction::Kind::Constant: stack[top++] = ins.value; break;
      case Instruction::Kind::Load: stack[top++] = values[ins.slot]; break;
      case Instruction::Kind::Negate: stack[top - 1] = -stack[top - 1]; break;
      case Instruction::Kind::Call: stack[top - 1] = apply_function(ins.fn, stack[top - 1]); break;
      case Instruction::Kind::Binary:
        --top;
        stack[top - 1] = apply_binary(ins.op, stack[top - 1], stack[top]);
        break;
    }
  }
  return checked(top == 0 ? 0.0 : stack[0], "expression");
}

}  // namespace jetgeom
