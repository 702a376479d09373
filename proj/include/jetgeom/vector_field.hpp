#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jetgeom/expr.hpp"
#include "jetgeom/tensor.hpp"

namespace jetgeom {

/// The right-hand side X of an autonomous system dx^i/dt = X^i(x), together
/// with its symbolic first and second partial derivatives.
///
/// All derivative expressions are built once at construction and compiled
/// over the slot list (variables..., parameters...). Instances are immutable
/// and may be shared between threads.
class VectorField {
 public:
  VectorField(std::vector<std::string> variables, std::vector<Expr> components, Env parameters = {});

  std::size_t dimension() const noexcept { return variables_.size(); }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<Expr>& components() const noexcept { return components_; }
  const Env& parameters() const noexcept { return parameters_; }

  /// dX^i/dx^j.
  const Expr& jacobian_entry(std::size_t i, std::size_t j) const;
  /// N^i_j = -1/2 (dX^i/dx^j - dX^j/dx^i). Entries below the diagonal are the
  /// negation of the mirrored entry; the diagonal is the constant 0.
  const Expr& connection_entry(std::size_t i, std::size_t j) const;
  /// dN^i_j/dx^k, with the same mirrored layout as connection_entry.
  const Expr& torsion_entry(std::size_t i, std::size_t j, std::size_t k) const;
  /// dF_ij/dx^k + dF_jk/dx^i + dF_ki/dx^j with F = -N.
  const Expr& maxwell_entry(std::size_t i, std::size_t j, std::size_t k) const;

  Vector value(std::span<const double> x) const;
  Matrix jacobian(std::span<const double> x) const;
  /// Connection matrix; exactly antisymmetric.
  Matrix connection(std::span<const double> x) const;
  /// Torsion entries [i][j][k]; exactly antisymmetric in (i, j).
  Tensor3 torsion(std::span<const double> x) const;
  Tensor3 maxwell(std::span<const double> x) const;

  /// Same field with some parameter values replaced.
  VectorField with_parameters(const Env& overrides) const;

 private:
  struct Cache;

  std::vector<double> slots(std::span<const double> x) const;
  void require_point(std::span<const double> x) const;

  std::vector<std::string> variables_;
  std::vector<Expr> components_;
  Env parameters_;
  std::shared_ptr<const Cache> cache_;
};

}  // namespace jetgeom
