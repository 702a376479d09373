#include <doctest.h>

#include <cmath>

#include "jetgeom/geometry.hpp"
#include "jetgeom/models.hpp"
#include "support.hpp"

using namespace jetgeom;
using namespace jetgeom::models;

namespace {

KaldorParams random_kaldor(testing::Rng& rng) {
  KaldorParams p;
  p.s = testing::uniform(rng, 0.1, 5.0);
  p.q = testing::uniform(rng, 0.01, 0.99);
  return p;
}

TbmParams random_tbm(testing::Rng& rng) {
  TbmParams p;
  p.s = testing::uniform(rng, 0.05, 0.95);
  p.theta = testing::uniform(rng, 0.0, 0.3);
  p.n = testing::uniform(rng, 0.0, 0.1);
  p.mu = testing::uniform(rng, 0.1, 2.0);
  p.epsilon = testing::uniform(rng, 0.1, 2.0);
  return p;
}

}  // namespace

TEST_CASE("kaldor field components") {
  const KaldorParams p;
  const VectorField f = kaldor_field(p);
  CHECK(f.variables() == std::vector<std::string>{"Y", "K"});
  const double x[2] = {0.5, 1.2};
  const Vector X = f.value(x);
  const double I = std::atan(0.5) - 0.2 * 1.2;
  const double S = 0.3 * 0.5;
  CHECK(X(0) == doctest::Approx(2.0 * (I - S)));
  CHECK(X(1) == doctest::Approx(I - 0.1 * 1.2));
}

TEST_CASE("kaldor connection at the origin") {
  const KaldorParams p;
  const double origin[2] = {0.0, 0.0};
  const Matrix N = nonlinear_connection(kaldor_field(p), origin);
  // I_Y = 1, I_K = -0.2, S_K = 0, so the bracket is 1 + 2 * 0.2.
  CHECK(N(0, 1) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(kaldor_bracket(p, 0.0, 0.0) == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(kaldor_energy_oracle(p, 0.0, 0.0) == doctest::Approx(0.49).epsilon(1e-15));
}

TEST_CASE("kaldor pipeline equals the closed-form matrices") {
  testing::Rng rng(101);
  for (int s = 0; s < 100; ++s) {
    const KaldorParams p = random_kaldor(rng);
    const VectorField f = kaldor_field(p);
    const double Y = testing::uniform(rng, -3, 3), K = testing::uniform(rng, -3, 3);
    const double x[2] = {Y, K};
    CHECK(testing::max_rel_err(nonlinear_connection(f, x), kaldor_connection_oracle(p, Y, K)) < 1e-12);
    CHECK(testing::max_rel_err(em_form(f, x), -kaldor_connection_oracle(p, Y, K)) < 1e-12);
    const Tensor3 R = torsion(f, x), Ro = kaldor_torsion_oracle(p, Y, K);
    for (std::size_t k = 0; k < 2; ++k) CHECK(testing::max_rel_err(R.slice(k), Ro.slice(k)) < 1e-12);
    CHECK(testing::rel_err(yang_mills_energy(f, x), kaldor_energy_oracle(p, Y, K)) < 1e-12);
  }
}

TEST_CASE("kaldor accepts other investment and saving functions") {
  KaldorParams p;
  p.investment = parse("Y^3-Y*K+tanh(K)");
  p.saving = parse("0.2*Y+0.1*K^2");
  const VectorField f = kaldor_field(p);
  const double x[2] = {0.8, -0.4};
  CHECK(testing::max_rel_err(nonlinear_connection(f, x), kaldor_connection_oracle(p, 0.8, -0.4)) < 1e-12);
  const Tensor3 R = torsion(f, x), Ro = kaldor_torsion_oracle(p, 0.8, -0.4);
  for (std::size_t k = 0; k < 2; ++k) CHECK(testing::max_rel_err(R.slice(k), Ro.slice(k)) < 1e-12);
}

TEST_CASE("kaldor parameter validation") {
  KaldorParams p;
  p.s = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.q = 1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.investment = parse("Y+z");
  CHECK_THROWS_AS(kaldor_field(p), ValidationError);
}

TEST_CASE("tbm pipeline equals the closed-form matrices") {
  testing::Rng rng(202);
  for (int s = 0; s < 100; ++s) {
    const TbmParams p = random_tbm(rng);
    const VectorField f = tbm_field(p);
    const double k = testing::uniform(rng, 0.1, 5), m = testing::uniform(rng, 0.1, 3),
                 q = testing::uniform(rng, -0.5, 0.5);
    const double x[3] = {k, m, q};
    CHECK(testing::max_rel_err(nonlinear_connection(f, x), tbm_connection_oracle(p, k, m, q)) < 1e-12);
    const Tensor3 R = torsion(f, x);
    for (int slice = 1; slice <= 3; ++slice) {
      CHECK(testing::max_rel_err(R.slice(static_cast<std::size_t>(slice - 1)), tbm_torsion_oracle(p, k, m, q, slice)) <
            1e-12);
    }
    CHECK(testing::rel_err(yang_mills_energy(f, x), tbm_energy_oracle(p, k, m, q)) < 1e-12);
  }
}

TEST_CASE("tbm actual inflation") {
  const TbmParams p;
  const double expected = 0.4 * (1.0 - (0.25 * 2.0 - 0.5 * 0.1)) + 0.1;
  CHECK(tbm_actual_inflation(p, 2.0, 1.0, 0.1) == doctest::Approx(expected));
  CHECK_THROWS_AS(tbm_torsion_oracle(p, 1, 1, 0, 4), ValidationError);
}
