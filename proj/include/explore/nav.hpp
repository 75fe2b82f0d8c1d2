#pragma once

#include <optional>
#include <vector>

#include "explore/grid.hpp"

namespace explore {

/// Cells whose center lies within `radius` of an Occupied cell center.
/// Occupied cells themselves are always set.
Raster<std::uint8_t> inflate(const OccupancyGrid& grid, double radius);

struct PlannedPath {
  /// Simplified polyline of cell centers, start cell first.
  std::vector<Point2> points;
  /// Every cell of the unsimplified route.
  std::vector<CellIndex> cells;
  /// Route length in meters.
  double cost = 0.0;
};

inline constexpr double kGoalSnapRadius = 0.5;

/// Traversability used by the planner: Free and not inflated.
bool traversable(const OccupancyGrid& grid, const Raster<std::uint8_t>& inflated, CellIndex c);

/// A* on the 8-connected Free cells of `grid` with cells inflated by
/// `inflation` removed. Diagonal moves cost sqrt(2) cells and may not cut a
/// corner of a non-traversable cell. The goal cell may be Unknown (it is
/// entered but never expanded); an Occupied or inflated goal snaps to the
/// nearest traversable cell within kGoalSnapRadius.
/// Throws InvalidStart when `from` is outside the grid or not on a Free cell.
std::optional<PlannedPath> plan_path(const OccupancyGrid& grid, Point2 from, Point2 to,
                                     double inflation = 0.25);

/// Drops interior points that lie on the straight line through their neighbours.
std::vector<Point2> remove_collinear(const std::vector<Point2>& points);

}  // namespace explore
