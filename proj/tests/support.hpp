#pragma once

// Shared helpers for the test binaries: error metrics, seeded random
// expressions and fields, and finite-difference oracles that never touch
// the symbolic differentiator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jetgeom/expr.hpp"
#include "jetgeom/tensor.hpp"
#include "jetgeom/vector_field.hpp"

namespace testing {

using jetgeom::Env;
using jetgeom::Expr;
using jetgeom::Matrix;
using jetgeom::Vector;

inline double rel_err(double a, double b) {
  return std::fabs(a - b) / (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

inline double max_rel_err(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max(worst, rel_err(a(i, j), b(i, j)));
  return worst;
}

inline double max_rel_err(const Vector& a, const Vector& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a(i), b(i)));
  return worst;
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector random_point(Rng& rng, std::size_t n, double lo, double hi) {
  Vector p(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) p(static_cast<Eigen::Index>(i)) = uniform(rng, lo, hi);
  return p;
}

// Random expression trees over `vars`. Exponents are small integers so that
// negative bases stay in the domain; domain and size problems are filtered
// by the callers through evaluation.
class ExprGenerator {
 public:
  ExprGenerator(std::vector<std::string> vars, bool bounded_functions_only)
      : vars_(std::move(vars)), bounded_(bounded_functions_only) {}

  Expr draw(Rng& rng, int depth) const {
    std::uniform_int_distribution<int> pick(0, 9);
    if (depth <= 0 || pick(rng) < 2) return leaf(rng);
    const int kind = pick(rng);
    if (kind < 5) {
      static constexpr jetgeom::BinaryOp ops[] = {jetgeom::BinaryOp::Add, jetgeom::BinaryOp::Sub,
                                                  jetgeom::BinaryOp::Mul, jetgeom::BinaryOp::Div};
      auto op = ops[std::uniform_int_distribution<int>(0, bounded_ ? 2 : 3)(rng)];
      return Expr::binary(op, draw(rng, depth - 1), draw(rng, depth - 1));
    }
    if (kind == 5) {
      const int exponent = std::uniform_int_distribution<int>(2, 3)(rng);
      return Expr::binary(jetgeom::BinaryOp::Pow, draw(rng, depth - 1), Expr::constant(exponent));
    }
    if (kind == 6) return -draw(rng, depth - 1);
    static constexpr jetgeom::Function all[] = {jetgeom::Function::Sin,  jetgeom::Function::Cos,
                                                jetgeom::Function::Atan, jetgeom::Function::Tanh,
                                                jetgeom::Function::Exp,  jetgeom::Function::Ln,
                                                jetgeom::Function::Sqrt};
    const int last = bounded_ ? 3 : 6;
    return Expr::call(all[std::uniform_int_distribution<int>(0, last)(rng)], draw(rng, depth - 1));
  }

 private:
  Expr leaf(Rng& rng) const {
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
      return Expr::constant(std::round(uniform(rng, -2.0, 2.0) * 100.0) / 100.0);
    }
    return Expr::variable(vars_[std::uniform_int_distribution<std::size_t>(0, vars_.size() - 1)(rng)]);
  }

  std::vector<std::string> vars_;
  bool bounded_;
};

inline std::optional<double> try_eval(const Expr& e, const Env& env) {
  try {
    return jetgeom::evaluate(e, env);
  } catch (const jetgeom::EvalError&) {
    return std::nullopt;
  }
}

// Central difference of e in `var` at env; nullopt on a domain problem.
inline std::optional<double> central_difference(const Expr& e, Env env, const std::string& var, double h) {
  const double x = env.at(var);
  env[var] = x + h;
  auto fp = try_eval(e, env);
  env[var] = x - h;
  auto fm = try_eval(e, env);
  if (!fp || !fm) return std::nullopt;
  return (*fp - *fm) / (2.0 * h);
}

// Jacobian of a field by central differences of its component values.
inline Matrix fd_jacobian(const jetgeom::VectorField& f, const Vector& x, double h) {
  const auto n = static_cast<Eigen::Index>(f.dimension());
  Matrix J(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    const Vector fp = f.value({xp.data(), static_cast<std::size_t>(n)});
    const Vector fm = f.value({xm.data(), static_cast<std::size_t>(n)});
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  return J;
}

// Taylor series with scaling and squaring.
inline Matrix matrix_exp(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const Matrix b = a * scale;
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Random smooth fields built from bounded functions; every draw evaluates
// at the sample points the caller checks.
inline jetgeom::VectorField random_smooth_field(Rng& rng, std::size_t n) {
  static const std::vector<std::string> names{"x", "y", "z", "w"};
  std::vector<std::string> vars(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(n));
  ExprGenerator gen(vars, true);
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < n; ++i) comps.push_back(gen.draw(rng, 4));
  return jetgeom::VectorField(vars, comps);
}

}  // namespace testing
