#include "jetgeom/models.hpp"

#include <cmath>
#include <set>

namespace jetgeom::models {

namespace {

void require_variables(const Expr& e, const std::set<std::string>& allowed, const char* what) {
  for (const auto& name : free_variables(e)) {
    if (!allowed.contains(name)) {
      throw ValidationError(std::string(what) + " may only depend on the state variables; found '" + name + "'");
    }
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

struct UpperEntry {
  Eigen::Index i;
  Eigen::Index j;
  double value;
};

Matrix antisymmetric(Eigen::Index n, std::initializer_list<UpperEntry> upper) {
  Matrix m = Matrix::Zero(n, n);
  for (const auto& [i, j, v] : upper) {
    m(i, j) = v;
    m(j, i) = -v;
  }
  return m;
}

struct KaldorPartials {
  double I_Y, I_K, S_K;
  double I_YY, I_YK, I_KK, S_YK, S_KK;
};

KaldorPartials kaldor_partials(const KaldorParams& p, double Y, double K) {
  const Env env{{"Y", Y}, {"K", K}};
  const Expr I_Y = differentiate(p.investment, "Y");
  const Expr I_K = differentiate(p.investment, "K");
  const Expr S_K = differentiate(p.saving, "K");
  KaldorPartials d{};
  d.I_Y = evaluate(I_Y, env);
  d.I_K = evaluate(I_K, env);
  d.S_K = evaluate(S_K, env);
  d.I_YY = evaluate(differentiate(I_Y, "Y"), env);
  d.I_YK = evaluate(differentiate(I_Y, "K"), env);
  d.I_KK = evaluate(differentiate(I_K, "K"), env);
  d.S_YK = evaluate(differentiate(differentiate(p.saving, "Y"), "K"), env);
  d.S_KK = evaluate(differentiate(S_K, "K"), env);
  return d;
}

struct TbmPartials {
  double l, l_k, l_q, l_kk, l_kq, l_qq;
};

TbmPartials tbm_partials(const TbmParams& p, double k, double q) {
  const Env env{{"k", k}, {"q", q}};
  const Expr l_k = differentiate(p.liquidity, "k");
  const Expr l_q = differentiate(p.liquidity, "q");
  TbmPartials d{};
  d.l = evaluate(p.liquidity, env);
  d.l_k = evaluate(l_k, env);
  d.l_q = evaluate(l_q, env);
  d.l_kk = evaluate(differentiate(l_k, "k"), env);
  d.l_kq = evaluate(differentiate(l_k, "q"), env);
  d.l_qq = evaluate(differentiate(l_q, "q"), env);
  return d;
}

}  // namespace

void KaldorParams::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("Kaldor parameter s must be positive");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("Kaldor parameter q must lie in (0, 1)");
  require_variables(investment, {"Y", "K"}, "investment function I");
  require_variables(saving, {"Y", "K"}, "saving function S");
}

void TbmParams::validate() const {
  require_finite(s, "TBM parameter s");
  require_finite(theta, "TBM parameter theta");
  require_finite(n, "TBM parameter n");
  require_finite(mu, "TBM parameter mu");
  require_finite(epsilon, "TBM parameter epsilon");
  require_variables(production, {"k"}, "production function f");
  require_variables(liquidity, {"k", "q"}, "liquidity function l");
}

VectorField kaldor_field(const KaldorParams& p) {
  p.validate();
  const Expr s = Expr::variable("s");
  const Expr q = Expr::variable("q");
  const Expr K = Expr::variable("K");
  const Expr& I = p.investment;
  const Expr& S = p.saving;
  return VectorField({"Y", "K"}, {s * (I - S), I - q * K}, Env{{"s", p.s}, {"q", p.q}});
}

double kaldor_bracket(const KaldorParams& p, double Y, double K) {
  const auto d = kaldor_partials(p, Y, K);
  return d.I_Y - p.s * (d.I_K - d.S_K);
}

Matrix kaldor_connection_oracle(const KaldorParams& p, double Y, double K) {
  const double half_bracket = 0.5 * kaldor_bracket(p, Y, K);
  return antisymmetric(2, {{0, 1, half_bracket}});
}

Tensor3 kaldor_torsion_oracle(const KaldorParams& p, double Y, double K) {
  const auto d = kaldor_partials(p, Y, K);
  Tensor3 r(2);
  const double along_Y = 0.5 * (d.I_YY - p.s * (d.I_YK - d.S_YK));
  const double along_K = 0.5 * (d.I_YK - p.s * (d.I_KK - d.S_KK));
  r(0, 1, 0) = along_Y;
  r(1, 0, 0) = -along_Y;
  r(0, 1, 1) = along_K;
  r(1, 0, 1) = -along_K;
  return r;
}

double kaldor_energy_oracle(const KaldorParams& p, double Y, double K) {
  const double b = kaldor_bracket(p, Y, K);
  return 0.25 * b * b;
}

VectorField tbm_field(const TbmParams& p) {
  p.validate();
  const Expr k = Expr::variable("k");
  const Expr m = Expr::variable("m");
  const Expr q = Expr::variable("q");
  const Expr s = Expr::variable("s");
  const Expr theta = Expr::variable("theta");
  const Expr n = Expr::variable("n");
  const Expr mu = Expr::variable("mu");
  const Expr eps = Expr::variable("epsilon");
  const Expr one = Expr::constant(1.0);
  const Expr& f = p.production;
  const Expr& l = p.liquidity;

  Expr dk = s * f - (one - s) * (theta - q) * m - n * k;
  Expr dm = m * (theta - n - q - eps * (m - l));
  Expr dq = mu * eps * (m - l);
  return VectorField({"k", "m", "q"}, {dk, dm, dq},
                     Env{{"s", p.s}, {"theta", p.theta}, {"n", p.n}, {"mu", p.mu}, {"epsilon", p.epsilon}});
}

Matrix tbm_connection_oracle(const TbmParams& p, double k, double m, double q) {
  const auto d = tbm_partials(p, k, q);
  const double s = p.s, th = p.theta, mu = p.mu, e = p.epsilon;
  const double a12 = -(1 - s) * (th - q) - e * m * d.l_k;
  const double a13 = (1 - s) * m + mu * e * d.l_k;
  const double a23 = -m + e * m * d.l_q - mu * e;
  return antisymmetric(3, {{0, 1, -0.5 * a12}, {0, 2, -0.5 * a13}, {1, 2, -0.5 * a23}});
}

Matrix tbm_torsion_oracle(const TbmParams& p, double k, double m, double q, int slice) {
  const auto d = tbm_partials(p, k, q);
  const double s = p.s, mu = p.mu, e = p.epsilon;
  switch (slice) {
    case 1:
      return antisymmetric(
          3, {{0, 1, -0.5 * (-e * m * d.l_kk)}, {0, 2, -0.5 * (mu * e * d.l_kk)}, {1, 2, -0.5 * (e * m * d.l_kq)}});
    case 2:
      return antisymmetric(3, {{0, 1, -0.5 * (-e * d.l_k)}, {0, 2, -0.5 * (1 - s)}, {1, 2, -0.5 * (-1 + e * d.l_q)}});
    case 3:
      return antisymmetric(3, {{0, 1, -0.5 * (1 - s - e * m * d.l_kq)},
                               {0, 2, -0.5 * (mu * e * d.l_kq)},
                               {1, 2, -0.5 * (e * m * d.l_qq)}});
    default:
      throw ValidationError("TBM torsion slice must be 1, 2 or 3");
  }
}

double tbm_energy_oracle(const TbmParams& p, double k, double m, double q) {
  const auto d = tbm_partials(p, k, q);
  const double s = p.s, th = p.theta, mu = p.mu, e = p.epsilon;
  const double b1 = (1 - s) * (th - q) + e * m * d.l_k;
  const double b2 = (1 - s) * m + mu * e * d.l_k;
  const double b3 = m - e * m * d.l_q + mu * e;
  return 0.25 * (b1 * b1 + b2 * b2 + b3 * b3);
}

double tbm_actual_inflation(const TbmParams& p, double k, double m, double q) {
  const double l = evaluate(p.liquidity, Env{{"k", k}, {"q", q}});
  return p.epsilon * (m - l) + q;
}

}  // namespace jetgeom::models
