#include <doctest.h>

#include <cmath>

#include "jetgeom/dynamics.hpp"
#include "jetgeom/geometry.hpp"
#include "jetgeom/models.hpp"
#include "support.hpp"

using namespace jetgeom;

namespace {

VectorField rotation() { return VectorField({"x", "y"}, {parse("-w*y"), parse("w*x")}, {{"w", 1.5}}); }

VectorField linear3() {
  return VectorField({"x", "y", "z"}, {parse("x+2*y-z"), parse("3*x-y"), parse("0.5*z-4*y+x")});
}

VectorField nonlinear3() {
  return VectorField({"x", "y", "z"}, {parse("sin(y)*z+x^2"), parse("atan(x*z)-y"), parse("exp(0.3*x)*cos(y)+z^3")});
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out(i++) = d;
  return out;
}

// Euler-Lagrange expression d/dt dL/dv - dL/dx of JLS along the quadratic
// path through (x, v, a), built from nested central differences of jls().
Vector el_by_differences(const VectorField& f, const Vector& x, const Vector& v, const Vector& a) {
  const Eigen::Index n = x.size();
  auto L = [&](const Vector& px, const Vector& pv) { return jls(f, JetSample{0.0, px, pv}); };
  auto dL_dv = [&](const Vector& px, const Vector& pv, Eigen::Index i) {
    const double h = 1e-3;
    Vector p = pv, m = pv;
    p(i) += h;
    m(i) -= h;
    return (L(px, p) - L(px, m)) / (2 * h);
  };
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ht = 1e-4;
    auto at = [&](double t) { return dL_dv(x + v * t + 0.5 * a * t * t, v + a * t, i); };
    const double ddt = (at(ht) - at(-ht)) / (2 * ht);
    const double hx = 1e-5;
    Vector p = x, m = x;
    p(i) += hx;
    m(i) -= hx;
    const double dLdx = (L(p, v) - L(m, v)) / (2 * hx);
    out(i) = ddt - dLdx;
  }
  return out;
}

}  // namespace

TEST_CASE("connection, em form and energy of a rotation") {
  const VectorField f = rotation();
  const Vector p = vec({0.3, -0.8});
  const Matrix N = nonlinear_connection(f, as_span(p));
  CHECK(N(0, 0) == 0.0);
  CHECK(N(0, 1) == doctest::Approx(1.5));
  CHECK(N(1, 0) == doctest::Approx(-1.5));
  CHECK((em_form(f, as_span(p)) + N).cwiseAbs().maxCoeff() == 0.0);
  CHECK(yang_mills_energy(f, as_span(p)) == doctest::Approx(2.25));
  CHECK(torsion(f, as_span(p)).max_abs() == 0.0);
}

TEST_CASE("linear fields have zero torsion and constant energy") {
  const VectorField f = linear3();
  testing::Rng rng(3);
  const Matrix J = jacobian(f, as_span(testing::random_point(rng, 3, -1, 1)));
  const Matrix A = 0.5 * (J - J.transpose());
  for (int i = 0; i < 20; ++i) {
    const Vector p = testing::random_point(rng, 3, -5, 5);
    CHECK(torsion(f, as_span(p)).max_abs() == 0.0);
    CHECK(yang_mills_energy(f, as_span(p)) == doctest::Approx(0.5 * A.squaredNorm()).epsilon(1e-14));
    CHECK(maxwell_residual(f, as_span(p)).max_abs() == 0.0);
  }
}

TEST_CASE("jacobian and connection against finite differences") {
  const VectorField f = nonlinear3();
  testing::Rng rng(11);
  for (int s = 0; s < 50; ++s) {
    const Vector p = testing::random_point(rng, 3, -1, 1);
    const Matrix Jfd = testing::fd_jacobian(f, p, 1e-6);
    CHECK(testing::max_rel_err(jacobian(f, as_span(p)), Jfd) < 1e-8);
    const Matrix Nfd = -0.5 * (Jfd - Jfd.transpose());
    CHECK(testing::max_rel_err(nonlinear_connection(f, as_span(p)), Nfd) < 1e-8);
  }
}

TEST_CASE("torsion is the spatial gradient of the connection") {
  const VectorField f = nonlinear3();
  testing::Rng rng(12);
  for (int s = 0; s < 30; ++s) {
    const Vector p = testing::random_point(rng, 3, -1, 1);
    const Tensor3 R = torsion(f, as_span(p));
    for (Eigen::Index k = 0; k < 3; ++k) {
      Vector pp = p, pm = p;
      const double h = 1e-5;
      pp(k) += h;
      pm(k) -= h;
      const Matrix d = (nonlinear_connection(f, as_span(pp)) - nonlinear_connection(f, as_span(pm))) / (2 * h);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
          CHECK(testing::rel_err(R(i, j, static_cast<std::size_t>(k)), d(i, j)) < 1e-7);
          CHECK(R(i, j, static_cast<std::size_t>(k)) == -R(j, i, static_cast<std::size_t>(k)));
        }
    }
  }
}

TEST_CASE("property: antisymmetry, F = -N and Maxwell on random smooth fields") {
  testing::Rng rng(31);
  for (int draw = 0; draw < 30; ++draw) {
    const VectorField f = testing::random_smooth_field(rng, 3);
    for (int s = 0; s < 10; ++s) {
      const Vector p = testing::random_point(rng, 3, -1.5, 1.5);
      const Matrix N = nonlinear_connection(f, as_span(p));
      CHECK((N + N.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK((em_form(f, as_span(p)) + N).cwiseAbs().maxCoeff() == 0.0);
      CHECK(maxwell_residual(f, as_span(p)).max_abs() < 1e-9);
      CHECK(yang_mills_energy(f, as_span(p)) >= 0.0);
    }
  }
}

TEST_CASE("Cartan connection and curvature vanish structurally") {
  const VectorField f = nonlinear3();
  const VanishingTensor c = cartan_connection(f);
  const VanishingTensor k = curvature(f);
  CHECK(c.rank == 3);
  CHECK(k.rank == 4);
  CHECK(c.size() == 27);
  CHECK(k.size() == 81);
  for (double v : c.dense()) CHECK(v == 0.0);
  for (double v : k.dense()) CHECK(v == 0.0);
}

TEST_CASE("jls and action") {
  const VectorField f = rotation();
  const Vector x = vec({1.0, 2.0});
  const Vector v = f.value(as_span(x));
  CHECK(jls(f, {0.0, x, v}) == 0.0);
  CHECK(jls(f, {0.0, x, v + vec({1.0, -2.0})}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(jls(f, {0.0, x, vec({1.0})}), ValidationError);
}

TEST_CASE("property: field lines minimize the action") {
  const VectorField f = models::kaldor_field({});
  IntegratorConfig cfg{0.0, 2.0, 0.01};
  const double x0[2] = {0.4, -0.3};
  const Trajectory line = integrate_first_order(f, x0, cfg);
  const double base = action(f, line);
  CHECK(base < 1e-20);
  const double T = cfg.t1 - cfg.t0;
  for (double eps : {1e-3, 1e-2, 1e-1}) {
    Trajectory bent(2);
    for (std::size_t j = 0; j < line.size(); ++j) {
      const double t = line.time(j);
      const double bump = eps * std::sin(M_PI * t / T);
      const double dbump = eps * M_PI / T * std::cos(M_PI * t / T);
      const double x[2] = {line.state(j)[0] + bump, line.state(j)[1] - 0.5 * bump};
      const double xv[2] = {line.velocity(j)[0] + dbump, line.velocity(j)[1] - 0.5 * dbump};
      bent.push_back(t, x, xv);
    }
    CHECK(action(f, bent) > base);
  }
}

TEST_CASE("el residual matches the Euler-Lagrange expression by differences") {
  const VectorField f = nonlinear3();
  testing::Rng rng(8);
  for (int s = 0; s < 40; ++s) {
    const Vector x = testing::random_point(rng, 3, -1, 1);
    const Vector v = testing::random_point(rng, 3, -2, 2);
    const Vector a = testing::random_point(rng, 3, -2, 2);
    const Vector expected = 0.5 * el_by_differences(f, x, v, a);
    const Vector got = el_residual(f, as_span(x), as_span(v), as_span(a));
    CHECK(testing::max_rel_err(got, expected) < 1e-5);
  }
}

TEST_CASE("prolonged acceleration solves the EL system and is on-shell along field lines") {
  const VectorField f = nonlinear3();
  testing::Rng rng(9);
  for (int s = 0; s < 40; ++s) {
    const Vector x = testing::random_point(rng, 3, -1, 1);
    const Vector v = testing::random_point(rng, 3, -2, 2);
    const Vector a = prolonged_acceleration(f, as_span(x), as_span(v));
    CHECK(el_residual(f, as_span(x), as_span(v), as_span(a)).cwiseAbs().maxCoeff() < 1e-12);
    const Vector X = f.value(as_span(x));
    const Vector on = prolonged_acceleration(f, as_span(x), as_span(X));
    CHECK(testing::max_rel_err(on, jacobian(f, as_span(x)) * X) < 1e-13);
  }
}

TEST_CASE("report gathers every object at the point") {
  const VectorField f = models::kaldor_field({});
  const double p[2] = {0.0, 0.0};
  const GeometryReport r = report(f, p);
  CHECK(r.point.size() == 2);
  CHECK(r.connection(0, 1) == doctest::Approx(0.5 * models::kaldor_bracket({}, 0.0, 0.0)));
  CHECK(r.yang_mills == doctest::Approx(models::kaldor_energy_oracle({}, 0.0, 0.0)));
  CHECK(r.maxwell_residual_max == 0.0);
  CHECK((r.em_form + r.connection).cwiseAbs().maxCoeff() == 0.0);
  const double bad[1] = {0.0};
  CHECK_THROWS_AS(report(f, bad), ValidationError);
}
