#include "jetgeom/riemann.hpp"

#include <set>
#include <sstream>

namespace jetgeom {

struct MetricField::Cache {
  std::vector<std::string> slot_names;
  std::vector<CompiledExpr> entry_code;       // n*n
  std::vector<CompiledExpr> derivative_code;  // n*n*n, [h][j][k]
};

namespace {

constexpr double kMaxCondition = 1e12;

std::string describe_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

void require_compatible(const MetricField& g, const VectorField& f) {
  if (g.variables() != f.variables()) {
    throw ValidationError("metric and vector field use different variables");
  }
}

struct PointMetric {
  Matrix phi;
  Matrix inverse;
  ChristoffelTensor gamma;
};

ChristoffelTensor christoffel_from(const Matrix& inverse, const Tensor3& dphi) {
  const std::size_t n = dphi.dimension();
  ChristoffelTensor out{Tensor3(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t h = 0; h < n; ++h) {
          sum += inverse(i, h) * ((dphi(h, j, k) + dphi(h, k, j)) - dphi(j, k, h));
        }
        out.values(i, j, k) = 0.5 * sum;
      }
    }
  }
  return out;
}

PointMetric at_point(const MetricField& g, std::span<const double> x) {
  PointMetric pm;
  pm.phi = g.metric(x);
  pm.inverse = g.inverse(x);
  pm.gamma = christoffel_from(pm.inverse, g.derivatives(x));
  return pm;
}

Matrix nabla(const PointMetric& pm, const VectorField& f, std::span<const double> x, const Vector& X) {
  const Matrix J = f.jacobian(x);
  const auto n = J.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double sum = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) sum += pm.gamma.values(i, j, k) * X(k);
      out(i, j) = J(i, j) + sum;
    }
  }
  return out;
}

// W[i][j] = phi^ih phi_kj nabla_h X^k, where nabla_h X^k = cov[k][h]
Matrix transported(const PointMetric& pm, const Matrix& cov) {
  const auto n = cov.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double sum = 0.0;
      for (Eigen::Index h = 0; h < n; ++h)
        for (Eigen::Index k = 0; k < n; ++k) sum += pm.inverse(i, h) * pm.phi(k, j) * cov(k, h);
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace

MetricField::MetricField(std::vector<std::string> variables, std::vector<Expr> entries, Env parameters)
    : variables_(std::move(variables)), entries_(std::move(entries)), parameters_(std::move(parameters)) {
  const std::size_t n = variables_.size();
  if (n == 0) throw ValidationError("metric needs at least one variable");
  if (entries_.size() != n * n) throw ValidationError("metric must be an n×n array of expressions");
  std::set<std::string> names(variables_.begin(), variables_.end());
  if (names.size() != n) throw ValidationError("duplicate metric variable");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!(entries_[i * n + j] == entries_[j * n + i])) {
        throw ValidationError("metric entry [" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                              "] differs from its transpose");
      }
      for (const auto& name : free_variables(entries_[i * n + j])) {
        if (!names.contains(name) && !parameters_.contains(name)) {
          throw ValidationError("metric uses unknown symbol '" + name + "'");
        }
      }
    }
  }
  auto cache = std::make_shared<Cache>();
  cache->slot_names = variables_;
  for (const auto& [name, value] : parameters_) cache->slot_names.push_back(name);
  const std::span<const std::string> slots(cache->slot_names);
  for (const auto& e : entries_) cache->entry_code.emplace_back(e, slots);
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        cache->derivative_code.emplace_back(differentiate(entries_[h * n + j], variables_[k]), slots);
  cache_ = std::move(cache);
}

MetricField MetricField::euclidean(std::vector<std::string> variables) {
  const std::size_t n = variables.size();
  std::vector<Expr> entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) entries.push_back(Expr::constant(i == j ? 1.0 : 0.0));
  return MetricField(std::move(variables), std::move(entries));
}

Matrix MetricField::metric(std::span<const double> x) const {
  const std::size_t n = dimension();
  if (x.size() != n) throw ValidationError("point dimension does not match metric");
  std::vector<double> s(x.begin(), x.end());
  for (const auto& [name, value] : parameters_) s.push_back(value);
  Matrix phi(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) phi(i, j) = cache_->entry_code[i * n + j](s);

  Eigen::LLT<Matrix> llt(phi);
  if (llt.info() != Eigen::Success) {
    throw MetricDomainError("metric is not positive definite at " + describe_point(x));
  }
  Eigen::PartialPivLU<Matrix> lu(phi);
  if (lu.rcond() * kMaxCondition < 1.0) {
    throw MetricDomainError("metric condition number exceeds 1e12 at " + describe_point(x));
  }
  return phi;
}

Matrix MetricField::inverse(std::span<const double> x) const {
  const Matrix phi = metric(x);
  return Eigen::PartialPivLU<Matrix>(phi).inverse();
}

Tensor3 MetricField::derivatives(std::span<const double> x) const {
  const std::size_t n = dimension();
  if (x.size() != n) throw ValidationError("point dimension does not match metric");
  std::vector<double> s(x.begin(), x.end());
  for (const auto& [name, value] : parameters_) s.push_back(value);
  Tensor3 out(n);
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out(h, j, k) = cache_->derivative_code[(h * n + j) * n + k](s);
  return out;
}

ChristoffelTensor christoffel(const MetricField& g, std::span<const double> x) {
  return christoffel_from(g.inverse(x), g.derivatives(x));
}

Matrix covariant_derivative(const MetricField& g, const VectorField& f, std::span<const double> x) {
  require_compatible(g, f);
  const PointMetric pm = at_point(g, x);
  return nabla(pm, f, x, f.value(x));
}

Matrix deformation_tensor(const MetricField& g, const VectorField& f, std::span<const double> x) {
  require_compatible(g, f);
  const PointMetric pm = at_point(g, x);
  const Matrix cov = nabla(pm, f, x, f.value(x));
  return cov - transported(pm, cov);
}

// Term order mirrors prolonged_acceleration: for phi = identity, gamma = 0
// and every extra product is an exact zero, so both agree bit for bit.
Vector geometric_dynamics_acceleration(const MetricField& g, const VectorField& f, std::span<const double> x,
                                       std::span<const double> v) {
  require_compatible(g, f);
  if (v.size() != f.dimension()) throw ValidationError("velocity dimension does not match field");
  const PointMetric pm = at_point(g, x);
  const Vector X = f.value(x);
  const Matrix cov = nabla(pm, f, x, X);
  const Matrix W = transported(pm, cov);
  const auto n = static_cast<Eigen::Index>(f.dimension());
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double geodesic = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        geodesic += pm.gamma.values(i, j, k) * v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(k)];
    double rotation = 0.0;
    double drift = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) rotation += (cov(i, j) - W(i, j)) * v[static_cast<std::size_t>(j)];
    for (Eigen::Index j = 0; j < n; ++j) drift += W(i, j) * X(j);
    out(i) = (rotation - geodesic) + drift;
  }
  return out;
}

double least_squares_lagrangian(const MetricField& g, const VectorField& f, std::span<const double> x,
                                std::span<const double> y) {
  require_compatible(g, f);
  if (y.size() != f.dimension()) throw ValidationError("velocity dimension does not match field");
  const Matrix phi = g.metric(x);
  const Vector X = f.value(x);
  const auto n = static_cast<Eigen::Index>(f.dimension());
  Vector r(n);
  for (Eigen::Index i = 0; i < n; ++i) r(i) = y[static_cast<std::size_t>(i)] - X(i);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) sum += phi(i, j) * r(i) * r(j);
  return 0.5 * sum;
}

Matrix riemann_lagrange_connection(const MetricField& g, const VectorField& f, std::span<const double> x,
                                   std::span<const double> y) {
  require_compatible(g, f);
  if (y.size() != f.dimension()) throw ValidationError("velocity dimension does not match field");
  const PointMetric pm = at_point(g, x);
  const Matrix cov = nabla(pm, f, x, f.value(x));
  const Matrix F = cov - transported(pm, cov);
  const auto n = static_cast<Eigen::Index>(f.dimension());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double sum = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) sum += pm.gamma.values(i, j, k) * y[static_cast<std::size_t>(k)];
      out(i, j) = sum - F(i, j);
    }
  }
  return out;
}

}  // namespace jetgeom
