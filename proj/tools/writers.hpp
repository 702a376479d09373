#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "jetgeom/levelset.hpp"
#include "jetgeom/trajectory.hpp"

namespace jetgeom::cli {

/// "%.17g"; the C locale is used regardless of the environment.
std::string format_real(double v);

/// Header t,x1..xn,v1..vn,a1..an and one row per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

void write_segments_csv(std::ostream& out, const LevelSet& ls);

struct SvgAxes {
  std::string x_label;
  std::string y_label;
  AxisRange x;
  AxisRange y;
};
void write_segments_svg(std::ostream& out, const LevelSet& ls, const SvgAxes& axes);

void write_mesh_obj(std::ostream& out, const LevelSet& ls);

/// Joins segments that share endpoints into maximal polylines. Closed loops
/// repeat their first point at the end.
std::vector<std::vector<Point2>> chain_segments(const std::vector<std::array<Point2, 2>>& segments);

}  // namespace jetgeom::cli
