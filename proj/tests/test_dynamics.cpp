#include <doctest.h>

#include <cmath>

#include "jetgeom/dynamics.hpp"
#include "jetgeom/geometry.hpp"
#include "jetgeom/models.hpp"
#include "jetgeom/riemann.hpp"
#include "support.hpp"

using namespace jetgeom;

namespace {

double sup_state_difference(const Trajectory& a, const Trajectory& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < a.dimension(); ++i)
      worst = std::max(worst, std::fabs(a.state(j)[i] - b.state(j)[i]));
  return worst;
}

AccelerationFn prolongation_of(const VectorField& f) {
  return [&f](std::span<const double> x, std::span<const double> v) { return prolonged_acceleration(f, x, v); };
}

}  // namespace

TEST_CASE("time grid ends exactly at t1") {
  const IntegratorConfig cfg{0.0, 1.0, 0.3};
  const std::vector<double> g = cfg.grid();
  REQUIRE(g.size() == 5);
  CHECK(g[3] == doctest::Approx(0.9));
  CHECK(g.back() == 1.0);
  const IntegratorConfig even{0.0, 1.0, 0.1};
  CHECK(even.grid().size() == 11);
  CHECK(even.grid().back() == 1.0);
  CHECK_THROWS_AS((IntegratorConfig{1.0, 0.0, 0.1}.validate()), ValidationError);
  CHECK_THROWS_AS((IntegratorConfig{0.0, 1.0, 0.0}.validate()), ValidationError);
  CHECK_THROWS_AS((IntegratorConfig{0.0, 1.0, 1e-8}.validate()), ValidationError);
}

TEST_CASE("zero field gives constant rows") {
  const VectorField f({"x", "y"}, {parse("0"), parse("0")});
  const double x0[2] = {1.5, -2.0};
  const Trajectory traj = integrate_first_order(f, x0, {0.0, 1.0, 0.25});
  CHECK(traj.size() == 5);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    CHECK(traj.state(j)[0] == 1.5);
    CHECK(traj.state(j)[1] == -2.0);
    CHECK(traj.velocity(j)[0] == 0.0);
    CHECK(traj.acceleration(j)[1] == 0.0);
  }
}

TEST_CASE("linear flows follow the matrix exponential") {
  const VectorField f({"x", "y", "z"}, {parse("-0.5*x+y"), parse("-x-0.2*y+0.3*z"), parse("0.1*x-z")});
  const double x0[3] = {1.0, 0.5, -0.25};
  const Trajectory traj = integrate_first_order(f, x0, {0.0, 3.0, 0.01});
  const Matrix A = f.jacobian(x0);
  const Vector start = Eigen::Map<const Vector>(x0, 3);
  for (std::size_t j = 0; j < traj.size(); j += 50) {
    const Vector exact = testing::matrix_exp(A * traj.time(j)) * start;
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::fabs(traj.state(j)[i] - exact(static_cast<Eigen::Index>(i))) < 1e-9);
  }
}

TEST_CASE("rotation returns to its start after one period") {
  const VectorField f({"x", "y"}, {parse("-y"), parse("x")});
  const double x0[2] = {1.0, 0.0};
  const Trajectory traj = integrate_first_order(f, x0, {0.0, 2.0 * M_PI, 1e-3});
  const auto end = traj.state(traj.size() - 1);
  CHECK(std::hypot(end[0] - 1.0, end[1]) < 1e-10);
  CHECK(traj.time(traj.size() - 1) == 2.0 * M_PI);
}

TEST_CASE("first-order trajectories are on-shell for every step") {
  const VectorField f = models::kaldor_field({});
  const double x0[2] = {0.5, -0.5};
  for (double dt : {0.2, 0.05, 0.01, 0.001}) {
    const Trajectory traj = integrate_first_order(f, x0, {0.0, 5.0, dt});
    CHECK(verify_prolongation(f, traj) < 1e-10);
  }
  Trajectory bare(2);
  bare.push_back(0.0, x0, x0);
  CHECK_THROWS_AS(verify_prolongation(f, bare), ValidationError);
}

TEST_CASE("on-shell second-order integration converges to the field line at fourth order") {
  const VectorField f = models::kaldor_field({});
  const double x0[2] = {0.5, -0.5};
  const Vector v0 = f.value(x0);
  std::vector<double> errors;
  for (double dt : {0.1, 0.05, 0.025}) {
    const IntegratorConfig cfg{0.0, 5.0, dt};
    const Trajectory first = integrate_first_order(f, x0, cfg);
    const Trajectory second = integrate_second_order(prolongation_of(f), x0, as_span(v0), cfg);
    errors.push_back(sup_state_difference(first, second));
  }
  for (std::size_t k = 1; k < errors.size(); ++k) {
    const double order = std::log2(errors[k - 1] / errors[k]);
    CHECK(order >= 3.8);
    CHECK(order <= 4.2);
  }
}

TEST_CASE("off-shell starts leave the field line") {
  const VectorField f = models::kaldor_field({});
  const double x0[2] = {0.5, -0.5};
  const Vector v0 = f.value(x0) + Vector::Constant(2, 0.1);
  const IntegratorConfig cfg{0.0, 2.0, 0.01};
  const Trajectory first = integrate_first_order(f, x0, cfg);
  const Trajectory second = integrate_second_order(prolongation_of(f), x0, as_span(v0), cfg);
  CHECK(sup_state_difference(first, second) > 1e-3);
}

TEST_CASE("blow-up keeps the finite prefix") {
  const VectorField f({"x"}, {parse("x^2")});
  const double x0[1] = {1.0};
  try {
    integrate_first_order(f, x0, {0.0, 2.0, 0.01});
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.time() > 0.9);
    CHECK(e.partial().size() == e.last_finite_index() + 1);
    for (std::size_t j = 0; j < e.partial().size(); ++j) CHECK(std::isfinite(e.partial().state(j)[0]));
  }
}

TEST_CASE("metric leaving its domain stops the second-order integration") {
  const VectorField f({"x", "y"}, {parse("1"), parse("0")});
  const MetricField g({"x", "y"}, {parse("1-x"), parse("0"), parse("0"), parse("1")});
  AccelerationFn acc = [&](std::span<const double> x, std::span<const double> v) {
    return geometric_dynamics_acceleration(g, f, x, v);
  };
  const double x0[2] = {0.0, 0.0}, v0[2] = {1.0, 0.0};
  try {
    integrate_second_order(acc, x0, v0, {0.0, 5.0, 0.01});
    FAIL("expected a metric domain error");
  } catch (const PathDomainError& e) {
    CHECK(e.time() > 0.5);
    CHECK(e.time() < 1.5);
    CHECK(e.partial().size() > 10);
  }
}
