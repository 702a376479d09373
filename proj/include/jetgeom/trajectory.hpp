#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jetgeom/errors.hpp"

namespace jetgeom {

/// Time-ordered samples (t, x, dx/dt[, d2x/dt2]) of a curve in R^n.
/// Rows are stored contiguously, one row of n values per sample.
class Trajectory {
 public:
  explicit Trajectory(std::size_t dimension = 0) : n_(dimension) {}

  std::size_t dimension() const noexcept { return n_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool has_accelerations() const noexcept { return !accelerations_.empty(); }

  void push_back(double t, std::span<const double> x, std::span<const double> v) {
    check_row(x);
    check_row(v);
    if (!accelerations_.empty()) throw ValidationError("trajectory mixes rows with and without accelerations");
    times_.push_back(t);
    states_.insert(states_.end(), x.begin(), x.end());
    velocities_.insert(velocities_.end(), v.begin(), v.end());
  }

  void push_back(double t, std::span<const double> x, std::span<const double> v, std::span<const double> a) {
    check_row(x);
    check_row(v);
    check_row(a);
    if (accelerations_.size() != states_.size()) {
      throw ValidationError("trajectory mixes rows with and without accelerations");
    }
    times_.push_back(t);
    states_.insert(states_.end(), x.begin(), x.end());
    velocities_.insert(velocities_.end(), v.begin(), v.end());
    accelerations_.insert(accelerations_.end(), a.begin(), a.end());
  }

  double time(std::size_t j) const { return times_.at(j); }
  std::span<const double> state(std::size_t j) const { return row(states_, j); }
  std::span<const double> velocity(std::size_t j) const { return row(velocities_, j); }
  std::span<const double> acceleration(std::size_t j) const {
    if (accelerations_.empty()) throw ValidationError("trajectory has no accelerations");
    return row(accelerations_, j);
  }

  const std::vector<double>& times() const noexcept { return times_; }

  /// Throws ValidationError unless there are at least two samples with
  /// strictly increasing times.
  void require_monotone() const {
    if (times_.size() < 2) throw ValidationError("trajectory needs at least two samples");
    for (std::size_t j = 1; j < times_.size(); ++j) {
      if (!(times_[j] > times_[j - 1])) {
        throw ValidationError("trajectory times are not strictly increasing at sample " + std::to_string(j));
      }
    }
  }

 private:
  void check_row(std::span<const double> r) const {
    if (r.size() != n_) throw ValidationError("trajectory row has wrong dimension");
  }
  std::span<const double> row(const std::vector<double>& data, std::size_t j) const {
    if (j >= times_.size()) throw std::out_of_range("trajectory sample index");
    return std::span<const double>(data).subspan(j * n_, n_);
  }

  std::size_t n_;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<double> velocities_;
  std::vector<double> accelerations_;
};

}  // namespace jetgeom
