#include <doctest.h>

#include <cmath>
#include <map>

#include "jetgeom/geometry.hpp"
#include "jetgeom/levelset.hpp"
#include "jetgeom/models.hpp"
#include "support.hpp"

using namespace jetgeom;

namespace {

double radius2(std::span<const double> p) { return p[0] * p[0] + p[1] * p[1]; }
double radius3(std::span<const double> p) { return p[0] * p[0] + p[1] * p[1] + p[2] * p[2]; }

}  // namespace

TEST_CASE("grid layout") {
  const ScalarGrid g({{-1, 1}, {0, 2}}, {3, 5});
  CHECK(g.size() == 15);
  CHECK(g.coordinate(0, 2) == 1.0);
  CHECK(g.coordinate(1, 4) == 2.0);
  CHECK(g.spacing(1) == doctest::Approx(0.5));
  const std::size_t idx[2] = {1, 3};
  CHECK(g.flat_index(idx) == 8);
  CHECK_THROWS_AS(ScalarGrid({{0, 1}}, {4}), ValidationError);
  CHECK_THROWS_AS(ScalarGrid({{0, 1}, {1, 1}}, {4, 4}), ValidationError);
  CHECK_THROWS_AS(ScalarGrid({{0, 1}, {0, 1}}, {1, 4}), ValidationError);
}

TEST_CASE("sampling masks points where the function fails") {
  const ScalarGrid g = ScalarGrid::sample({{-1, 1}, {-1, 1}}, {5, 5}, [](std::span<const double> p) {
    if (p[0] == 0.0) throw EvalError("hole");
    return 1.0 / (p[0] == 1.0 ? 0.0 : 1.0);
  });
  std::size_t masked = 0;
  for (std::size_t i = 0; i < g.size(); ++i) masked += g.valid(i) ? 0 : 1;
  CHECK(masked == 10);
  const LevelSet ls = extract_contour_2d(g, 0.5);
  CHECK(ls.empty());
}

TEST_CASE("circle contour stays within two cell diagonals of the radius") {
  const ScalarGrid g = ScalarGrid::sample({{-2, 2}, {-2, 2}}, {256, 256}, radius2);
  const LevelSet ls = extract_contour_2d(g, 1.0);
  REQUIRE(!ls.segments.empty());
  double worst = 0.0;
  for (const auto& seg : ls.segments)
    for (const auto& p : seg) worst = std::max(worst, std::fabs(std::hypot(p[0], p[1]) - 1.0));
  CHECK(worst < 2.0 * g.cell_diagonal());
  // The polyline closes up: every endpoint is shared by exactly two segments.
  std::map<Point2, int> degree;
  for (const auto& seg : ls.segments) {
    ++degree[seg[0]];
    ++degree[seg[1]];
  }
  for (const auto& [p, d] : degree) CHECK(d == 2);
}

TEST_CASE("saddle cells follow the centre value") {
  ScalarGrid g({{0, 1}, {0, 1}}, {2, 2});
  // Corners (0,0), (0,1), (1,0), (1,1) in flat order.
  g.set(0, 1.0);
  g.set(1, 0.0);
  g.set(2, 0.0);
  g.set(3, 1.0);
  const LevelSet high = extract_contour_2d(g, 0.4);
  const LevelSet low = extract_contour_2d(g, 0.6);
  REQUIRE(high.segments.size() == 2);
  REQUIRE(low.segments.size() == 2);
  // Centre 0.5 is above 0.4: the high corners connect through the middle,
  // so each segment cuts off one low corner.
  auto cuts_corner = [](const std::array<Point2, 2>& s, double cx, double cy) {
    return std::fabs(s[0][0] - cx) + std::fabs(s[0][1] - cy) < 0.75 && std::fabs(s[1][0] - cx) + std::fabs(s[1][1] - cy) < 0.75;
  };
  for (const auto& s : high.segments) CHECK((cuts_corner(s, 0, 1) || cuts_corner(s, 1, 0)));
  for (const auto& s : low.segments) CHECK((cuts_corner(s, 0, 0) || cuts_corner(s, 1, 1)));
}

TEST_CASE("sphere isosurface: deviation, closure and outward normals") {
  const ScalarGrid g = ScalarGrid::sample({{-1.5, 1.5}, {-1.5, 1.5}, {-1.5, 1.5}}, {64, 64, 64}, radius3);
  const LevelSet ls = extract_isosurface_3d(g, 1.0);
  REQUIRE(!ls.triangles.empty());
  double worst = 0.0;
  for (const auto& v : ls.vertices) worst = std::max(worst, std::fabs(std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) - 1.0));
  CHECK(worst < 2.0 * g.cell_diagonal());

  std::map<std::pair<std::size_t, std::size_t>, int> edges;
  std::size_t outward = 0;
  for (const auto& t : ls.triangles) {
    for (int e = 0; e < 3; ++e) {
      std::size_t a = t[e], b = t[(e + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
    const Point3 &p0 = ls.vertices[t[0]], &p1 = ls.vertices[t[1]], &p2 = ls.vertices[t[2]];
    const Eigen::Vector3d u(p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]);
    const Eigen::Vector3d w(p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]);
    const Eigen::Vector3d c(p0[0] + p1[0] + p2[0], p0[1] + p1[1] + p2[1], p0[2] + p1[2] + p2[2]);
    if (u.cross(w).dot(c) > 0.0) ++outward;
  }
  CHECK(outward == ls.triangles.size());
  for (const auto& [e, count] : edges) CHECK(count == 2);
  // Closed genus-0 surface.
  const long chi = static_cast<long>(ls.vertices.size()) - static_cast<long>(edges.size()) +
                   static_cast<long>(ls.triangles.size());
  CHECK(chi == 2);
}

TEST_CASE("off-level extraction is empty") {
  const ScalarGrid g = ScalarGrid::sample({{-1, 1}, {-1, 1}}, {16, 16}, [](std::span<const double>) { return 3.0; });
  CHECK(extract_contour_2d(g, 1.0).empty());
  CHECK(extract_contour_2d(g, 3.0).segments.empty());
}

TEST_CASE("interpolation is exact for multilinear data") {
  const auto f = [](std::span<const double> p) { return 1.0 + 2.0 * p[0] - p[1] + 0.5 * p[0] * p[1]; };
  const ScalarGrid g = ScalarGrid::sample({{-1, 1}, {-2, 2}}, {7, 9}, f);
  testing::Rng rng(4);
  for (int s = 0; s < 100; ++s) {
    const double p[2] = {testing::uniform(rng, -1, 1), testing::uniform(rng, -2, 2)};
    CHECK(interpolate(g, p) == doctest::Approx(f(p)).epsilon(1e-13));
  }
  const double outside[2] = {1.5, 0.0};
  CHECK_THROWS_AS(interpolate(g, outside), ValidationError);
}

TEST_CASE("kaldor contour vertices satisfy the bracket equation") {
  const models::KaldorParams p;
  const VectorField f = models::kaldor_field(p);
  const ScalarGrid g = sample_energy(f, {{-3, 3}, {-3, 3}}, {128, 128});
  std::vector<double> values = g.values();
  // Halfway between two neighbouring sample values, so the contour never
  // runs along grid lines and every vertex is interpolated.
  std::sort(values.begin(), values.end());
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  const double C = 0.5 * (*mid + *std::upper_bound(mid, values.end(), *mid));
  const LevelSet ls = extract_contour_2d(g, C);
  REQUIRE(!ls.segments.empty());
  for (const auto& seg : ls.segments)
    for (const auto& v : seg) {
      const double b = models::kaldor_bracket(p, v[0], v[1]);
      CHECK(std::fabs(b * b - 4.0 * C) <= 4.0 * cell_variation(g, v));
    }
  CHECK_THROWS_AS(sample_energy(f, {{-1, 1}, {-1, 1}, {-1, 1}}, {4, 4, 4}), ValidationError);
}

TEST_CASE("tbm isosurface stays inside its bounds") {
  const VectorField f = models::tbm_field({});
  const std::vector<AxisRange> bounds{{0.5, 4}, {0.2, 2}, {-0.5, 0.5}};
  const ScalarGrid g = sample_energy(f, bounds, {24, 24, 24});
  std::vector<double> values = g.values();
  std::sort(values.begin(), values.end());
  const LevelSet ls = extract_isosurface_3d(g, values[values.size() / 2]);
  REQUIRE(!ls.triangles.empty());
  for (const auto& v : ls.vertices)
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(v[a] >= bounds[a].lo);
      CHECK(v[a] <= bounds[a].hi);
    }
}
