#pragma once

// Economic flows shipped as fixtures, with closed-form oracles for their
// connection, torsion and Yang-Mills energy. The oracles differentiate the
// user functions (I, S for Kaldor; f, l for TBM) directly and plug the
// partials into hand-written matrices, so they share no code path with the
// generic VectorField pipeline beyond differentiate().

#include <array>

#include "jetgeom/expr.hpp"
#include "jetgeom/tensor.hpp"
#include "jetgeom/vector_field.hpp"

namespace jetgeom::models {

/// Kaldor business cycle in national revenue Y and capital stock K:
///   dY/dt = s [I(Y,K) - S(Y,K)],   dK/dt = I(Y,K) - q K.
struct KaldorParams {
  double s = 2.0;  // adjustment speed, > 0
  double q = 0.1;  // depreciation, in (0, 1)
  Expr investment = parse("atan(Y)-0.2*K");
  Expr saving = parse("0.3*Y");

  void validate() const;
};

/// Tobin-Benhabib-Miyao monetary growth in capital-labor ratio k, money
/// stock per head m and expected inflation q:
///   dk/dt = s f(k) - (1-s)(theta - q) m - n k
///   dm/dt = m {theta - n - q - epsilon [m - l(k,q)]}
///   dq/dt = mu epsilon [m - l(k,q)]
struct TbmParams {
  double s = 0.3;        // saving ratio
  double theta = 0.1;    // money expansion rate
  double n = 0.02;       // population growth
  double mu = 0.5;       // expectation adjustment speed
  double epsilon = 0.4;  // price adjustment speed
  Expr production = parse("k-0.05*k^2");
  Expr liquidity = parse("0.25*k-0.5*q");

  void validate() const;
};

VectorField kaldor_field(const KaldorParams& p);
Matrix kaldor_connection_oracle(const KaldorParams& p, double Y, double K);
Tensor3 kaldor_torsion_oracle(const KaldorParams& p, double Y, double K);
double kaldor_energy_oracle(const KaldorParams& p, double Y, double K);
/// The bracket I_Y - s (I_K - S_K); the constant-energy curves are
/// bracket^2 = 4C.
double kaldor_bracket(const KaldorParams& p, double Y, double K);

VectorField tbm_field(const TbmParams& p);
Matrix tbm_connection_oracle(const TbmParams& p, double k, double m, double q);
/// Torsion matrix R_(1)slice for slice in {1, 2, 3}.
Matrix tbm_torsion_oracle(const TbmParams& p, double k, double m, double q, int slice);
double tbm_energy_oracle(const TbmParams& p, double k, double m, double q);
/// epsilon [m - l(k,q)] + q.
double tbm_actual_inflation(const TbmParams& p, double k, double m, double q);

}  // namespace jetgeom::models
