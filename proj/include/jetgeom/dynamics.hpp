#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jetgeom/tensor.hpp"
#include "jetgeom/trajectory.hpp"
#include "jetgeom/vector_field.hpp"

namespace jetgeom {

enum class IntegrationMethod { Rk4 };

/// Fixed-step integration over the compact interval [t0, t1].
struct IntegratorConfig {
  double t0 = 0.0;
  double t1 = 1.0;
  double step = 1e-2;
  IntegrationMethod method = IntegrationMethod::Rk4;

  void validate() const;
  /// Sample times t0, t0 + step, ..., ending exactly at t1 (the last step may
  /// be shorter).
  std::vector<double> grid() const;
};

/// A state became non-finite. `partial` holds every sample computed before
/// the failure.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, std::size_t last_finite_index, Trajectory partial, const std::string& detail);

  double time() const noexcept { return time_; }
  std::size_t last_finite_index() const noexcept { return last_finite_index_; }
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  double time_;
  std::size_t last_finite_index_;
  Trajectory partial_;
};

/// A metric domain failure annotated with the time at which it happened.
class PathDomainError : public MetricDomainError {
 public:
  PathDomainError(double time, Trajectory partial, const std::string& detail);

  double time() const noexcept { return time_; }
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  double time_;
  Trajectory partial_;
};

using AccelerationFn = std::function<Vector(std::span<const double> x, std::span<const double> v)>;

/// Classical RK4 on dx/dt = X(x). Velocities are X(state) and accelerations
/// J(state) X(state), taken from the field rather than from differencing.
Trajectory integrate_first_order(const VectorField& f, std::span<const double> x0, const IntegratorConfig& cfg);

/// RK4 on the first-order reduction (x, v)' = (v, accel(x, v)).
Trajectory integrate_second_order(const AccelerationFn& accel, std::span<const double> x0,
                                  std::span<const double> v0, const IntegratorConfig& cfg);

/// Max over samples of the infinity norm of el_residual(x, dx/dt, d2x/dt2).
double verify_prolongation(const VectorField& f, const Trajectory& traj);

}  // namespace jetgeom
