#include "jetgeom/vector_field.hpp"

#include <set>
#include <utility>

namespace jetgeom {

struct VectorField::Cache {
  std::size_t n = 0;
  std::vector<std::string> slot_names;

  std::vector<Expr> jacobian;    // n*n
  std::vector<Expr> connection;  // n*n
  std::vector<Expr> torsion;     // n*n*n
  std::vector<Expr> maxwell;     // n*n*n

  std::vector<CompiledExpr> component_code;
  std::vector<CompiledExpr> jacobian_code;
  std::vector<CompiledExpr> connection_code;  // upper triangle, row-major over i<j
  std::vector<CompiledExpr> torsion_code;     // upper triangle pairs × k
  std::vector<CompiledExpr> maxwell_code;

  std::size_t idx2(std::size_t i, std::size_t j) const { return i * n + j; }
  std::size_t idx3(std::size_t i, std::size_t j, std::size_t k) const { return (i * n + j) * n + k; }
};

namespace {

const Expr& zero() {
  static const Expr z = Expr::constant(0.0);
  return z;
}

}  // namespace

VectorField::VectorField(std::vector<std::string> variables, std::vector<Expr> components, Env parameters)
    : variables_(std::move(variables)), components_(std::move(components)), parameters_(std::move(parameters)) {
  const std::size_t n = variables_.size();
  if (n == 0) throw ValidationError("vector field needs at least one variable");
  if (components_.size() != n) {
    throw ValidationError("vector field has " + std::to_string(components_.size()) + " components for " +
                          std::to_string(n) + " variables");
  }
  std::set<std::string> seen;
  for (const auto& v : variables_) {
    if (!is_identifier(v)) throw ValidationError("invalid variable name '" + v + "'");
    if (!seen.insert(v).second) throw ValidationError("duplicate variable '" + v + "'");
    if (parameters_.contains(v)) throw ValidationError("'" + v + "' is both a variable and a parameter");
  }
  for (const auto& [name, value] : parameters_) {
    if (!is_identifier(name)) throw ValidationError("invalid parameter name '" + name + "'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& name : free_variables(components_[i])) {
      if (!seen.contains(name) && !parameters_.contains(name)) {
        throw ValidationError("component " + std::to_string(i + 1) + " uses unknown symbol '" + name + "'");
      }
    }
  }

  auto cache = std::make_shared<Cache>();
  cache->n = n;
  cache->slot_names = variables_;
  for (const auto& [name, value] : parameters_) cache->slot_names.push_back(name);
  const std::span<const std::string> slots(cache->slot_names);

  cache->jacobian.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cache->jacobian[cache->idx2(i, j)] = differentiate(components_[i], variables_[j]);

  cache->connection.assign(n * n, zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Expr diff = cache->jacobian[cache->idx2(i, j)] - cache->jacobian[cache->idx2(j, i)];
      const Expr nij = simplify(Expr::constant(-0.5) * diff);
      cache->connection[cache->idx2(i, j)] = nij;
      cache->connection[cache->idx2(j, i)] = simplify(-nij);
    }
  }

  cache->torsion.assign(n * n * n, zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const Expr t = differentiate(cache->connection[cache->idx2(i, j)], variables_[k]);
        cache->torsion[cache->idx3(i, j, k)] = t;
        cache->torsion[cache->idx3(j, i, k)] = simplify(-t);
      }
    }
  }

  // dF_ij/dx^k = -dN_ij/dx^k
  cache->maxwell.resize(n * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const Expr cyclic = cache->torsion[cache->idx3(i, j, k)] + cache->torsion[cache->idx3(j, k, i)] +
                            cache->torsion[cache->idx3(k, i, j)];
        cache->maxwell[cache->idx3(i, j, k)] = simplify(-cyclic);
      }
    }
  }

  for (const auto& c : components_) cache->component_code.emplace_back(c, slots);
  for (const auto& e : cache->jacobian) cache->jacobian_code.emplace_back(e, slots);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) cache->connection_code.emplace_back(cache->connection[cache->idx2(i, j)], slots);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) cache->torsion_code.emplace_back(cache->torsion[cache->idx3(i, j, k)], slots);
  for (const auto& e : cache->maxwell) cache->maxwell_code.emplace_back(e, slots);

  cache_ = std::move(cache);
}

const Expr& VectorField::jacobian_entry(std::size_t i, std::size_t j) const {
  return cache_->jacobian.at(cache_->idx2(i, j));
}

const Expr& VectorField::connection_entry(std::size_t i, std::size_t j) const {
  return cache_->connection.at(cache_->idx2(i, j));
}

const Expr& VectorField::torsion_entry(std::size_t i, std::size_t j, std::size_t k) const {
  return cache_->torsion.at(cache_->idx3(i, j, k));
}

const Expr& VectorField::maxwell_entry(std::size_t i, std::size_t j, std::size_t k) const {
  return cache_->maxwell.at(cache_->idx3(i, j, k));
}

void VectorField::require_point(std::span<const double> x) const {
  if (x.size() != dimension()) {
    throw ValidationError("point has " + std::to_string(x.size()) + " coordinates, field dimension is " +
                          std::to_string(dimension()));
  }
}

std::vector<double> VectorField::slots(std::span<const double> x) const {
  require_point(x);
  std::vector<double> values(x.begin(), x.end());
  values.reserve(values.size() + parameters_.size());
  for (const auto& [name, value] : parameters_) values.push_back(value);
  return values;
}

Vector VectorField::value(std::span<const double> x) const {
  const auto s = slots(x);
  Vector out(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) out(i) = cache_->component_code[i](s);
  return out;
}

Matrix VectorField::jacobian(std::span<const double> x) const {
  const auto s = slots(x);
  const std::size_t n = dimension();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = cache_->jacobian_code[cache_->idx2(i, j)](s);
  return out;
}

Matrix VectorField::connection(std::span<const double> x) const {
  const auto s = slots(x);
  const std::size_t n = dimension();
  Matrix out = Matrix::Zero(n, n);
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = cache_->connection_code[p++](s);
      out(i, j) = v;
      out(j, i) = -v;
    }
  }
  return out;
}

Tensor3 VectorField::torsion(std::span<const double> x) const {
  const auto s = slots(x);
  const std::size_t n = dimension();
  Tensor3 out(n);
  std::size_t p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double v = cache_->torsion_code[p++](s);
        out(i, j, k) = v;
        out(j, i, k) = -v;
      }
    }
  }
  return out;
}

Tensor3 VectorField::maxwell(std::span<const double> x) const {
  const auto s = slots(x);
  const std::size_t n = dimension();
  Tensor3 out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out(i, j, k) = cache_->maxwell_code[cache_->idx3(i, j, k)](s);
  return out;
}

VectorField VectorField::with_parameters(const Env& overrides) const {
  Env merged = parameters_;
  for (const auto& [name, value] : overrides) {
    if (!merged.contains(name)) throw ValidationError("unknown parameter '" + name + "'");
    merged[name] = value;
  }
  return VectorField(variables_, components_, std::move(merged));
}

}  // namespace jetgeom
