#include "jetgeom/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "jetgeom/geometry.hpp"

namespace jetgeom {

namespace {

constexpr double kMaxSteps = 1e7;

bool all_finite(const Vector& v) { return v.allFinite(); }

std::string at_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << "t=" << t;
  return os.str();
}

Vector to_vector(std::span<const double> s) {
  return Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size()));
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
    throw ValidationError("integration interval needs finite t1 > t0");
  }
  if (!std::isfinite(step) || !(step > 0.0)) throw ValidationError("integration step must be positive");
  if ((t1 - t0) / step > kMaxSteps) throw ValidationError("integration grid exceeds 1e7 steps");
}

std::vector<double> IntegratorConfig::grid() const {
  validate();
  const double ratio = (t1 - t0) / step;
  const auto full = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  std::vector<double> times;
  times.reserve(full + 2);
  for (std::size_t j = 0; j <= full; ++j) times.push_back(t0 + static_cast<double>(j) * step);
  if (std::fabs(times.back() - t1) <= 1e-9 * step) {
    times.back() = t1;
  } else if (times.back() < t1) {
    times.push_back(t1);
  } else {
    times.back() = t1;
  }
  return times;
}

BlowUpError::BlowUpError(double time, std::size_t last_finite_index, Trajectory partial, const std::string& detail)
    : std::runtime_error("integration blew up at " + at_time(time) + ": " + detail),
      time_(time),
      last_finite_index_(last_finite_index),
      partial_(std::move(partial)) {}

PathDomainError::PathDomainError(double time, Trajectory partial, const std::string& detail)
    : MetricDomainError(detail + " (" + at_time(time) + ")"), time_(time), partial_(std::move(partial)) {}

Trajectory integrate_first_order(const VectorField& f, std::span<const double> x0, const IntegratorConfig& cfg) {
  if (x0.size() != f.dimension()) throw ValidationError("initial state has wrong dimension");
  const std::vector<double> times = cfg.grid();
  Trajectory traj(f.dimension());
  Vector x = to_vector(x0);
  if (!all_finite(x)) throw ValidationError("initial state must be finite");

  auto rhs = [&](const Vector& y) { return f.value(as_span(y)); };
  auto record = [&](double t, const Vector& y) {
    const Vector v = rhs(y);
    const Vector a = f.jacobian(as_span(y)) * v;
    traj.push_back(t, as_span(y), as_span(v), as_span(a));
  };

  try {
    record(times[0], x);
  } catch (const EvalError& e) {
    throw BlowUpError(times[0], 0, traj, e.what());
  }
  for (std::size_t j = 1; j < times.size(); ++j) {
    const double h = times[j] - times[j - 1];
    try {
      const Vector k1 = rhs(x);
      const Vector k2 = rhs(x + 0.5 * h * k1);
      const Vector k3 = rhs(x + 0.5 * h * k2);
      const Vector k4 = rhs(x + h * k3);
      Vector next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!all_finite(next)) throw EvalError("non-finite state");
      x = std::move(next);
      record(times[j], x);
    } catch (const EvalError& e) {
      throw BlowUpError(times[j], traj.size() - 1, traj, e.what());
    }
  }
  return traj;
}

Trajectory integrate_second_order(const AccelerationFn& accel, std::span<const double> x0,
                                  std::span<const double> v0, const IntegratorConfig& cfg) {
  if (x0.size() != v0.size()) throw ValidationError("initial position and velocity differ in dimension");
  const std::vector<double> times = cfg.grid();
  const std::size_t n = x0.size();
  Trajectory traj(n);
  Vector x = to_vector(x0);
  Vector v = to_vector(v0);
  if (!all_finite(x) || !all_finite(v)) throw ValidationError("initial state must be finite");

  auto acc = [&](const Vector& p, const Vector& w) {
    Vector a = accel(as_span(p), as_span(w));
    if (static_cast<std::size_t>(a.size()) != n) throw ValidationError("acceleration has wrong dimension");
    if (!all_finite(a)) throw EvalError("non-finite acceleration");
    return a;
  };

  double t_current = times[0];
  try {
    traj.push_back(times[0], as_span(x), as_span(v), as_span(acc(x, v)));
    for (std::size_t j = 1; j < times.size(); ++j) {
      t_current = times[j];
      const double h = times[j] - times[j - 1];
      const Vector a1 = acc(x, v);
      const Vector& kx1 = v;
      const Vector kx2 = v + 0.5 * h * a1;
      const Vector a2 = acc(x + 0.5 * h * kx1, kx2);
      const Vector kx3 = v + 0.5 * h * a2;
      const Vector a3 = acc(x + 0.5 * h * kx2, kx3);
      const Vector kx4 = v + h * a3;
      const Vector a4 = acc(x + h * kx3, kx4);
      Vector next_x = x + (h / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
      Vector next_v = v + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
      if (!all_finite(next_x) || !all_finite(next_v)) throw EvalError("non-finite state");
      x = std::move(next_x);
      v = std::move(next_v);
      traj.push_back(times[j], as_span(x), as_span(v), as_span(acc(x, v)));
    }
  } catch (const EvalError& e) {
    throw BlowUpError(t_current, traj.size() == 0 ? 0 : traj.size() - 1, traj, e.what());
  } catch (const MetricDomainError& e) {
    throw PathDomainError(t_current, traj, e.what());
  }
  return traj;
}

double verify_prolongation(const VectorField& f, const Trajectory& traj) {
  if (traj.dimension() != f.dimension()) throw ValidationError("trajectory dimension does not match field");
  if (traj.size() > 0 && !traj.has_accelerations()) {
    throw ValidationError("trajectory has no accelerations to verify");
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const Vector r = el_residual(f, traj.state(j), traj.velocity(j), traj.acceleration(j));
    worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace jetgeom
