#pragma once

// Riemann-Lagrange geometry on the 1-jet space J^1(T, R^n) induced by the
// jet least-squares Lagrangian
//
//   JLS(x, x1) = sum_i (x1^i - X^i(x))^2
//
// of a vector field X, with the Euclidean metrics on T and R^n. Every object
// is a closed-form expression in the partial derivatives of X:
//
//   connection   N = -1/2 (J - J^T),       J = dX/dx
//   torsion      R[i][j][k] = dN^i_j / dx^k
//   em form      F = -N
//   Yang-Mills   EYM = 1/2 trace(F F^T)
//
// The generalized Cartan connection and its curvature vanish identically.

#include <cstddef>
#include <span>

#include "jetgeom/tensor.hpp"
#include "jetgeom/trajectory.hpp"
#include "jetgeom/vector_field.hpp"

namespace jetgeom {

inline std::span<const double> as_span(const Vector& v) noexcept {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// A point (t, x, x1) of the jet space.
struct JetSample {
  double t = 0.0;
  Vector x;
  Vector x1;
};

struct GeometryReport {
  Vector point;
  Matrix jacobian;
  Matrix connection;
  Matrix em_form;
  Tensor3 torsion;
  double yang_mills = 0.0;
  double maxwell_residual_max = 0.0;
};

Matrix jacobian(const VectorField& f, std::span<const double> x);
Matrix nonlinear_connection(const VectorField& f, std::span<const double> x);
/// All adapted components vanish; shape n×n×n.
VanishingTensor cartan_connection(const VectorField& f);
Tensor3 torsion(const VectorField& f, std::span<const double> x);
/// All adapted components vanish; shape n×n×n×n.
VanishingTensor curvature(const VectorField& f);

/// Coefficients F_(i)j of F = F_(i)j δx1^i ∧ dx^j, where the adapted coframe
/// is δx1^i = dx1^i + N^i_k dx^k. Only the coefficient matrix is returned.
Matrix em_form(const VectorField& f, std::span<const double> x);

/// Cyclic sums dF_ij/dx^k + dF_jk/dx^i + dF_ki/dx^j. The covariant
/// derivative of the Berwald connection reduces to the plain partial here.
Tensor3 maxwell_residual(const VectorField& f, std::span<const double> x);

double yang_mills_energy(const VectorField& f, std::span<const double> x);

double jls(const VectorField& f, const JetSample& s);

/// Trapezoidal quadrature of JLS along the samples (t, x, dx/dt).
double action(const VectorField& f, const Trajectory& traj);

/// Euler-Lagrange expression of JLS divided by 2:
///   a - (J - J^T) v - J^T X(x).
/// Derivation in docs/euler_lagrange.md.
Vector el_residual(const VectorField& f, std::span<const double> x, std::span<const double> v,
                   std::span<const double> a);

/// The acceleration solving el_residual = 0: (J - J^T) v + J^T X(x).
Vector prolonged_acceleration(const VectorField& f, std::span<const double> x, std::span<const double> v);

GeometryReport report(const VectorField& f, std::span<const double> x);

}  // namespace jetgeom
