#pragma once

// Constant-energy sets {x : EYM(x) = C}: the plane curves of a 2-D flow and
// the surfaces of a 3-D flow, extracted from a sampled lattice by marching
// squares / marching cubes with linear edge interpolation.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "jetgeom/vector_field.hpp"

namespace jetgeom {

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Values on the lattice of cell corners. Flat index is row-major with the
/// last axis fastest: ((i0 * r1) + i1) * r2 + i2.
class ScalarGrid {
 public:
  ScalarGrid(std::vector<AxisRange> bounds, std::vector<std::size_t> resolution);

  /// Samples `fn` at every lattice point; points where it throws or returns
  /// a non-finite value are masked out.
  static ScalarGrid sample(std::vector<AxisRange> bounds, std::vector<std::size_t> resolution,
                           const std::function<double(std::span<const double>)>& fn);

  std::size_t dims() const noexcept { return bounds_.size(); }
  const std::vector<AxisRange>& bounds() const noexcept { return bounds_; }
  const std::vector<std::size_t>& resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return values_.size(); }

  double coordinate(std::size_t axis, std::size_t index) const;
  double spacing(std::size_t axis) const;
  double cell_diagonal() const;

  std::size_t flat_index(std::span<const std::size_t> index) const;
  double value(std::size_t flat) const { return values_[flat]; }
  bool valid(std::size_t flat) const { return valid_[flat] != 0; }
  void set(std::size_t flat, double v);
  void mask(std::size_t flat);

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<AxisRange> bounds_;
  std::vector<std::size_t> resolution_;
  std::vector<double> values_;
  std::vector<unsigned char> valid_;
};

using Point2 = std::array<double, 2>;
using Point3 = std::array<double, 3>;

struct LevelSet {
  double level = 0.0;
  std::size_t dims = 0;
  /// 2-D: one entry per cell crossing, in cell index order.
  std::vector<std::array<Point2, 2>> segments;
  /// 3-D: welded vertices and counter-clockwise triangles whose normals
  /// point towards increasing values.
  std::vector<Point3> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;

  bool empty() const noexcept { return segments.empty() && triangles.empty(); }
};

/// EYM sampled at the lattice points. Runs on several threads; the result
/// does not depend on the thread count.
ScalarGrid sample_energy(const VectorField& f, std::vector<AxisRange> bounds, std::vector<std::size_t> resolution);

/// Marching squares. Saddle cells are resolved by the cell-centre average.
LevelSet extract_contour_2d(const ScalarGrid& grid, double level);

/// Marching cubes with the standard 256-case table.
LevelSet extract_isosurface_3d(const ScalarGrid& grid, double level);

/// Multilinear interpolation of the lattice values at p (which must lie in
/// the grid bounds and in a cell with all corners valid).
double interpolate(const ScalarGrid& grid, std::span<const double> p);

/// Largest max-minus-min of corner values over the cells whose closure
/// contains p.
double cell_variation(const ScalarGrid& grid, std::span<const double> p);

}  // namespace jetgeom
