#include "jetgeom/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "jetgeom/geometry.hpp"
#include "marching_cubes_tables.hpp"

namespace jetgeom {

namespace {

// Corner offsets of a marching-cubes cell along axes (0, 1, 2).
constexpr int kCubeCorner[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};
constexpr int kCubeEdge[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

// Square corners (i,j), (i+1,j), (i+1,j+1), (i,j+1) and edges between them.
constexpr int kSquareCorner[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
constexpr int kSquareEdge[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};

// Edge pairs per marching-squares case; -1 terminates. Cases 5 and 10 are
// saddles and handled separately.
constexpr int kSquareSegments[16][4] = {
    {-1, -1, -1, -1}, {3, 0, -1, -1}, {0, 1, -1, -1}, {3, 1, -1, -1},
    {1, 2, -1, -1},   {-1, -1, -1, -1}, {0, 2, -1, -1}, {3, 2, -1, -1},
    {2, 3, -1, -1},   {0, 2, -1, -1}, {-1, -1, -1, -1}, {1, 2, -1, -1},
    {1, 3, -1, -1},   {0, 1, -1, -1}, {3, 0, -1, -1},   {-1, -1, -1, -1},
};

// Lattice point `a` and `b` are ordered so that the shared edge between two
// cells is interpolated identically from either side.
template <std::size_t D>
std::array<double, D> edge_point(const std::array<double, D>& pa, double va, const std::array<double, D>& pb,
                                 double vb, double level) {
  const double t = (level - va) / (vb - va);
  std::array<double, D> p{};
  for (std::size_t d = 0; d < D; ++d) p[d] = pa[d] + t * (pb[d] - pa[d]);
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScalarGrid

ScalarGrid::ScalarGrid(std::vector<AxisRange> bounds, std::vector<std::size_t> resolution)
    : bounds_(std::move(bounds)), resolution_(std::move(resolution)) {
  if (bounds_.size() != 2 && bounds_.size() != 3) throw ValidationError("grids are 2-D or 3-D");
  if (resolution_.size() != bounds_.size()) throw ValidationError("one resolution per axis is required");
  std::size_t total = 1;
  for (std::size_t a = 0; a < bounds_.size(); ++a) {
    if (!std::isfinite(bounds_[a].lo) || !std::isfinite(bounds_[a].hi) || !(bounds_[a].lo < bounds_[a].hi)) {
      throw ValidationError("axis " + std::to_string(a + 1) + " needs finite bounds with lo < hi");
    }
    if (resolution_[a] < 2) throw ValidationError("axis resolution must be at least 2");
    total *= resolution_[a];
  }
  values_.assign(total, 0.0);
  valid_.assign(total, 1);
}

ScalarGrid ScalarGrid::sample(std::vector<AxisRange> bounds, std::vector<std::size_t> resolution,
                              const std::function<double(std::span<const double>)>& fn) {
  ScalarGrid grid(std::move(bounds), std::move(resolution));
  const std::size_t total = grid.size();
  const std::size_t dims = grid.dims();

  auto work = [&](std::size_t begin, std::size_t end) {
    std::array<double, 3> p{};
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rest = flat;
      for (std::size_t a = dims; a-- > 0;) {
        p[a] = grid.coordinate(a, rest % grid.resolution_[a]);
        rest /= grid.resolution_[a];
      }
      try {
        const double v = fn(std::span<const double>(p.data(), dims));
        if (std::isfinite(v)) {
          grid.values_[flat] = v;
        } else {
          grid.mask(flat);
        }
      } catch (const std::exception&) {
        grid.mask(flat);
      }
    }
  };

  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, total / 4096));
  if (threads <= 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return grid;
}

double ScalarGrid::coordinate(std::size_t axis, std::size_t index) const {
  const auto& b = bounds_.at(axis);
  const std::size_t last = resolution_[axis] - 1;
  if (index >= last) return b.hi;
  return b.lo + (b.hi - b.lo) * static_cast<double>(index) / static_cast<double>(last);
}

double ScalarGrid::spacing(std::size_t axis) const {
  const auto& b = bounds_.at(axis);
  return (b.hi - b.lo) / static_cast<double>(resolution_[axis] - 1);
}

double ScalarGrid::cell_diagonal() const {
  double sum = 0.0;
  for (std::size_t a = 0; a < dims(); ++a) sum += spacing(a) * spacing(a);
  return std::sqrt(sum);
}

std::size_t ScalarGrid::flat_index(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < dims(); ++a) flat = flat * resolution_[a] + index[a];
  return flat;
}

void ScalarGrid::set(std::size_t flat, double v) {
  if (std::isfinite(v)) {
    values_.at(flat) = v;
    valid_.at(flat) = 1;
  } else {
    mask(flat);
  }
}

void ScalarGrid::mask(std::size_t flat) {
  values_.at(flat) = std::numeric_limits<double>::quiet_NaN();
  valid_.at(flat) = 0;
}

// ---------------------------------------------------------------------------

ScalarGrid sample_energy(const VectorField& f, std::vector<AxisRange> bounds, std::vector<std::size_t> resolution) {
  if (f.dimension() != bounds.size()) {
    throw ValidationError("field dimension " + std::to_string(f.dimension()) + " does not match " +
                          std::to_string(bounds.size()) + " grid axes");
  }
  return ScalarGrid::sample(std::move(bounds), std::move(resolution),
                            [&f](std::span<const double> x) { return yang_mills_energy(f, x); });
}

LevelSet extract_contour_2d(const ScalarGrid& grid, double level) {
  if (grid.dims() != 2) throw ValidationError("contour extraction needs a 2-D grid");
  LevelSet out;
  out.level = level;
  out.dims = 2;
  const std::size_t r0 = grid.resolution()[0];
  const std::size_t r1 = grid.resolution()[1];

  for (std::size_t i = 0; i + 1 < r0; ++i) {
    for (std::size_t j = 0; j + 1 < r1; ++j) {
      std::array<double, 4> val{};
      std::array<Point2, 4> pos{};
      bool usable = true;
      int cell_case = 0;
      for (int c = 0; c < 4; ++c) {
        const std::array<std::size_t, 2> idx{i + kSquareCorner[c][0], j + kSquareCorner[c][1]};
        const std::size_t flat = grid.flat_index(idx);
        if (!grid.valid(flat)) {
          usable = false;
          break;
        }
        val[c] = grid.value(flat);
        pos[c] = {grid.coordinate(0, idx[0]), grid.coordinate(1, idx[1])};
        if (val[c] < level) cell_case |= 1 << c;
      }
      if (!usable || cell_case == 0 || cell_case == 15) continue;

      auto crossing = [&](int edge) {
        const int a = kSquareEdge[edge][0];
        const int b = kSquareEdge[edge][1];
        // edges 2 and 3 run against lattice order
        if (edge >= 2) return edge_point<2>(pos[b], val[b], pos[a], val[a], level);
        return edge_point<2>(pos[a], val[a], pos[b], val[b], level);
      };
      auto emit = [&](int ea, int eb) { out.segments.push_back({crossing(ea), crossing(eb)}); };

      if (cell_case == 5 || cell_case == 10) {
        const bool centre_below = 0.25 * (val[0] + val[1] + val[2] + val[3]) < level;
        // below corners joined through the centre when centre_below
        const bool isolate_c1_c3 = (cell_case == 5) == centre_below;
        if (isolate_c1_c3) {
          emit(0, 1);
          emit(2, 3);
        } else {
          emit(3, 0);
          emit(1, 2);
        }
        continue;
      }
      const int* seg = kSquareSegments[cell_case];
      emit(seg[0], seg[1]);
    }
  }
  return out;
}

LevelSet extract_isosurface_3d(const ScalarGrid& grid, double level) {
  if (grid.dims() != 3) throw ValidationError("isosurface extraction needs a 3-D grid");
  LevelSet out;
  out.level = level;
  out.dims = 3;
  const auto& res = grid.resolution();
  std::map<Point3, std::size_t> welded;

  auto vertex_id = [&](const Point3& p) {
    const auto [it, inserted] = welded.emplace(p, out.vertices.size());
    if (inserted) out.vertices.push_back(p);
    return it->second;
  };

  for (std::size_t i = 0; i + 1 < res[0]; ++i) {
    for (std::size_t j = 0; j + 1 < res[1]; ++j) {
      for (std::size_t k = 0; k + 1 < res[2]; ++k) {
        std::array<double, 8> val{};
        std::array<Point3, 8> pos{};
        std::array<std::size_t, 8> flat{};
        bool usable = true;
        int cell_case = 0;
        for (int c = 0; c < 8; ++c) {
          const std::array<std::size_t, 3> idx{i + kCubeCorner[c][0], j + kCubeCorner[c][1], k + kCubeCorner[c][2]};
          flat[c] = grid.flat_index(idx);
          if (!grid.valid(flat[c])) {
            usable = false;
            break;
          }
          val[c] = grid.value(flat[c]);
          pos[c] = {grid.coordinate(0, idx[0]), grid.coordinate(1, idx[1]), grid.coordinate(2, idx[2])};
          if (val[c] < level) cell_case |= 1 << c;
        }
        if (!usable || detail::kEdgeTable[cell_case] == 0) continue;

        std::array<std::size_t, 12> edge_vertex{};
        for (int e = 0; e < 12; ++e) {
          if (!(detail::kEdgeTable[cell_case] & (1 << e))) continue;
          int a = kCubeEdge[e][0];
          int b = kCubeEdge[e][1];
          if (flat[b] < flat[a]) std::swap(a, b);
          edge_vertex[e] = vertex_id(edge_point<3>(pos[a], val[a], pos[b], val[b], level));
        }
        const int* tri = detail::kTriTable[cell_case];
        for (int t = 0; tri[t] != -1; t += 3) {
          const std::size_t v0 = edge_vertex[tri[t]];
          const std::size_t v1 = edge_vertex[tri[t + 1]];
          const std::size_t v2 = edge_vertex[tri[t + 2]];
          if (v0 == v1 || v1 == v2 || v0 == v2) continue;
          out.triangles.push_back({v0, v2, v1});
        }
      }
    }
  }
  return out;
}

namespace {

// Per-axis cell index and local coordinate of p.
struct CellLocation {
  std::array<std::size_t, 3> cell{};
  std::array<double, 3> local{};
};

CellLocation locate(const ScalarGrid& grid, std::span<const double> p) {
  if (p.size() != grid.dims()) throw ValidationError("point dimension does not match grid");
  CellLocation loc;
  for (std::size_t a = 0; a < grid.dims(); ++a) {
    const double u = (p[a] - grid.bounds()[a].lo) / grid.spacing(a);
    const double cells = static_cast<double>(grid.resolution()[a] - 1);
    if (!(u >= -1e-9 && u <= cells + 1e-9)) throw ValidationError("point lies outside the grid");
    const double clamped = std::clamp(u, 0.0, cells);
    auto c = static_cast<std::size_t>(std::min(std::floor(clamped), cells - 1));
    loc.cell[a] = c;
    loc.local[a] = clamped - static_cast<double>(c);
  }
  return loc;
}

}  // namespace

double interpolate(const ScalarGrid& grid, std::span<const double> p) {
  const CellLocation loc = locate(grid, p);
  const std::size_t dims = grid.dims();
  double sum = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << dims); ++corner) {
    std::array<std::size_t, 3> idx{};
    double weight = 1.0;
    for (std::size_t a = 0; a < dims; ++a) {
      const bool up = (corner >> a) & 1;
      idx[a] = loc.cell[a] + (up ? 1 : 0);
      weight *= up ? loc.local[a] : 1.0 - loc.local[a];
    }
    const std::size_t flat = grid.flat_index(std::span<const std::size_t>(idx.data(), dims));
    if (!grid.valid(flat)) throw ValidationError("interpolation touches a masked lattice point");
    sum += weight * grid.value(flat);
  }
  return sum;
}

double cell_variation(const ScalarGrid& grid, std::span<const double> p) {
  const CellLocation loc = locate(grid, p);
  const std::size_t dims = grid.dims();
  // Candidate cells: the located one, plus its lower neighbour on any axis
  // where p sits on a cell face.
  std::array<std::vector<std::size_t>, 3> candidates;
  for (std::size_t a = 0; a < dims; ++a) {
    candidates[a].push_back(loc.cell[a]);
    if (loc.local[a] <= 1e-12 && loc.cell[a] > 0) candidates[a].push_back(loc.cell[a] - 1);
    if (loc.local[a] >= 1.0 - 1e-12 && loc.cell[a] + 2 < grid.resolution()[a]) candidates[a].push_back(loc.cell[a] + 1);
  }
  double worst = 0.0;
  std::array<std::size_t, 3> pick{};
  auto visit_cell = [&](const std::array<std::size_t, 3>& cell) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t corner = 0; corner < (std::size_t{1} << dims); ++corner) {
      std::array<std::size_t, 3> idx{};
      for (std::size_t a = 0; a < dims; ++a) idx[a] = cell[a] + ((corner >> a) & 1);
      const std::size_t flat = grid.flat_index(std::span<const std::size_t>(idx.data(), dims));
      if (!grid.valid(flat)) return;
      lo = std::min(lo, grid.value(flat));
      hi = std::max(hi, grid.value(flat));
    }
    worst = std::max(worst, hi - lo);
  };
  const std::size_t n1 = dims > 1 ? candidates[1].size() : 1;
  const std::size_t n2 = dims > 2 ? candidates[2].size() : 1;
  for (std::size_t a0 : candidates[0]) {
    for (std::size_t b = 0; b < n1; ++b) {
      for (std::size_t c = 0; c < n2; ++c) {
        pick = {a0, dims > 1 ? candidates[1][b] : 0, dims > 2 ? candidates[2][c] : 0};
        visit_cell(pick);
      }
    }
  }
  return worst;
}

}  // namespace jetgeom
