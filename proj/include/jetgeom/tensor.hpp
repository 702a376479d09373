#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace jetgeom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense rank-3 array indexed [i][j][k], row-major (k fastest).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

  std::size_t dimension() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * n_ + j) * n_ + k]; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * n_ + j) * n_ + k]; }

  /// The n×n matrix [·][·][k].
  Matrix slice(std::size_t k) const {
    Matrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j, k);
    return m;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, v < 0 ? -v : v);
    return m;
  }

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// A tensor whose components vanish identically for every field. It holds
/// no storage, so a non-zero entry cannot be represented.
struct VanishingTensor {
  std::size_t dimension = 0;
  std::size_t rank = 0;

  template <class... Index>
  constexpr double operator()(Index...) const noexcept {
    return 0.0;
  }

  std::size_t size() const noexcept {
    std::size_t s = 1;
    for (std::size_t r = 0; r < rank; ++r) s *= dimension;
    return s;
  }

  std::vector<double> dense() const { return std::vector<double>(size(), 0.0); }
};

}  // namespace jetgeom
