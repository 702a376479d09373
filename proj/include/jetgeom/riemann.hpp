#pragma once

// Single-time geometric dynamics of a vector field X on a Riemannian
// manifold (R^n, phi). The second-order system
//
//   x'' + gamma^i_jk x'^j x'^k = F^i_j x'^j + phi^ih phi_kj X^j nabla_h X^k
//
// with F^i_j = nabla_j X^i - phi^ih phi_kj nabla_h X^k is the Euler-Lagrange
// system of LS(x, y) = 1/2 phi_ij (y - X)^i (y - X)^j.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jetgeom/expr.hpp"
#include "jetgeom/tensor.hpp"
#include "jetgeom/vector_field.hpp"

namespace jetgeom {

class MetricField {
 public:
  /// `entries` is n×n row-major; entry [i][j] must be structurally equal to
  /// entry [j][i].
  MetricField(std::vector<std::string> variables, std::vector<Expr> entries, Env parameters = {});

  static MetricField euclidean(std::vector<std::string> variables);

  std::size_t dimension() const noexcept { return variables_.size(); }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const Expr& entry(std::size_t i, std::size_t j) const { return entries_.at(i * dimension() + j); }
  const Env& parameters() const noexcept { return parameters_; }

  /// phi(x); throws MetricDomainError if it is not positive definite or its
  /// condition number exceeds 1e12.
  Matrix metric(std::span<const double> x) const;
  Matrix inverse(std::span<const double> x) const;
  /// [h][j][k] = d phi_hj / dx^k.
  Tensor3 derivatives(std::span<const double> x) const;

 private:
  struct Cache;

  std::vector<std::string> variables_;
  std::vector<Expr> entries_;
  Env parameters_;
  std::shared_ptr<const Cache> cache_;
};

/// gamma^i_jk stored at [i][j][k]; symmetric in (j, k).
struct ChristoffelTensor {
  Tensor3 values;
};

ChristoffelTensor christoffel(const MetricField& g, std::span<const double> x);

/// [i][j] = nabla_j X^i = dX^i/dx^j + gamma^i_jk X^k.
Matrix covariant_derivative(const MetricField& g, const VectorField& f, std::span<const double> x);

/// [i][j] = F^i_j = nabla_j X^i - phi^ih phi_kj nabla_h X^k.
Matrix deformation_tensor(const MetricField& g, const VectorField& f, std::span<const double> x);

Vector geometric_dynamics_acceleration(const MetricField& g, const VectorField& f, std::span<const double> x,
                                       std::span<const double> v);

double least_squares_lagrangian(const MetricField& g, const VectorField& f, std::span<const double> x,
                                std::span<const double> y);

/// Nonlinear connection gamma^i_jk y^k - F^i_j carried by the product
/// structure (R × M, 1 + phi).
Matrix riemann_lagrange_connection(const MetricField& g, const VectorField& f, std::span<const double> x,
                                   std::span<const double> y);

}  // namespace jetgeom
