#pragma once

#include <functional>

#include "explore/grid.hpp"

namespace explore {

enum class RayTerminal { Obstacle, MaxRange, MapEdge };

struct RayHit {
  double range = 0.0;
  RayTerminal terminal = RayTerminal::MaxRange;
  /// Cell that stopped the ray; meaningful only for Obstacle.
  CellIndex hit_cell{};
};

/// Called for every traversed cell in visit order with the ray parameter at
/// which the cell was entered. The occupied cell that stops the ray is not
/// reported through the visitor.
using CellVisitor = std::function<void(CellIndex, double entry_range)>;

/// Grid line traversal (Amanatides-Woo). Stops at the first Occupied cell
/// boundary, at max_range, or where the ray leaves the grid. A ray passing
/// exactly through a cell corner steps diagonally.
RayHit raycast(const OccupancyGrid& grid, Point2 from, double heading, double max_range,
               const CellVisitor& visit = {});

}  // namespace explore
