#include "jetgeom/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace jetgeom {

namespace {

void require_same_dimension(const VectorField& f, std::span<const double> v, const char* what) {
  if (v.size() != f.dimension()) {
    throw ValidationError(std::string(what) + " has " + std::to_string(v.size()) +
                          " components, field dimension is " + std::to_string(f.dimension()));
  }
}

}  // namespace

Matrix jacobian(const VectorField& f, std::span<const double> x) { return f.jacobian(x); }

Matrix nonlinear_connection(const VectorField& f, std::span<const double> x) { return f.connection(x); }

VanishingTensor cartan_connection(const VectorField& f) { return {f.dimension(), 3}; }

Tensor3 torsion(const VectorField& f, std::span<const double> x) { return f.torsion(x); }

VanishingTensor curvature(const VectorField& f) { return {f.dimension(), 4}; }

Matrix em_form(const VectorField& f, std::span<const double> x) { return -f.connection(x); }

Tensor3 maxwell_residual(const VectorField& f, std::span<const double> x) { return f.maxwell(x); }

double yang_mills_energy(const VectorField& f, std::span<const double> x) {
  const Matrix F = em_form(f, x);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < F.rows(); ++i)
    for (Eigen::Index j = 0; j < F.cols(); ++j) sum += F(i, j) * F(i, j);
  return 0.5 * sum;
}

double jls(const VectorField& f, const JetSample& s) {
  require_same_dimension(f, as_span(s.x1), "jet velocity");
  const Vector X = f.value(as_span(s.x));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    const double r = s.x1(i) - X(i);
    sum += r * r;
  }
  return sum;
}

double action(const VectorField& f, const Trajectory& traj) {
  traj.require_monotone();
  if (traj.dimension() != f.dimension()) throw ValidationError("trajectory dimension does not match field");
  auto lagrangian = [&](std::size_t j) {
    JetSample s;
    s.t = traj.time(j);
    s.x = Eigen::Map<const Vector>(traj.state(j).data(), static_cast<Eigen::Index>(f.dimension()));
    s.x1 = Eigen::Map<const Vector>(traj.velocity(j).data(), static_cast<Eigen::Index>(f.dimension()));
    return jls(f, s);
  };
  double total = 0.0;
  double previous = lagrangian(0);
  for (std::size_t j = 1; j < traj.size(); ++j) {
    const double current = lagrangian(j);
    total += 0.5 * (traj.time(j) - traj.time(j - 1)) * (previous + current);
    previous = current;
  }
  return total;
}

// With L = sum_i (v_i - X_i)^2:
//   dL/dv_i        = 2 (v_i - X_i)
//   d/dt dL/dv_i   = 2 (a_i - J_ij v_j)
//   dL/dx_i        = -2 J_ji (v_j - X_j)
// so d/dt dL/dv - dL/dx = 2 [a - (J - J^T) v - J^T X].
Vector el_residual(const VectorField& f, std::span<const double> x, std::span<const double> v,
                   std::span<const double> a) {
  require_same_dimension(f, a, "acceleration");
  const Vector accel = prolonged_acceleration(f, x, v);
  Vector r(accel.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = a[static_cast<std::size_t>(i)] - accel(i);
  return r;
}

// Summation order is shared with geometric_dynamics_acceleration so that the
// Euclidean metric reproduces this result bit for bit.
Vector prolonged_acceleration(const VectorField& f, std::span<const double> x, std::span<const double> v) {
  require_same_dimension(f, v, "velocity");
  const Matrix J = f.jacobian(x);
  const Vector X = f.value(x);
  const auto n = static_cast<Eigen::Index>(f.dimension());
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double rotation = 0.0;
    double drift = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) rotation += (J(i, j) - J(j, i)) * v[static_cast<std::size_t>(j)];
    for (Eigen::Index j = 0; j < n; ++j) drift += J(j, i) * X(j);
    out(i) = rotation + drift;
  }
  return out;
}

GeometryReport report(const VectorField& f, std::span<const double> x) {
  GeometryReport r;
  r.point = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
  r.jacobian = f.jacobian(x);
  r.connection = f.connection(x);
  r.em_form = -r.connection;
  r.torsion = f.torsion(x);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < r.em_form.rows(); ++i)
    for (Eigen::Index j = 0; j < r.em_form.cols(); ++j) sum += r.em_form(i, j) * r.em_form(i, j);
  r.yang_mills = 0.5 * sum;
  r.maxwell_residual_max = f.maxwell(x).max_abs();
  return r;
}

}  // namespace jetgeom
