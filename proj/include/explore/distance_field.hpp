#pragma once

#include "explore/grid.hpp"

namespace explore {

/// Per-cell distance (meters) from the cell centre to the nearest obstacle
/// cell centre. Obstacles are Occupied and Unknown cells.
struct DistanceField {
  Raster<double> meters;
  double resolution = 1.0;

  double at(CellIndex c) const { return meters[c]; }
  int width() const { return meters.width(); }
  int height() const { return meters.height(); }
};

/// Two-pass 3-4 chamfer transform scaled by resolution / 3. Relative error
/// against the Euclidean distance stays under 6%.
/// Throws UndefinedField if the grid has no Occupied or Unknown cell.
DistanceField distance_transform(const OccupancyGrid& grid);

/// Chamfer transform in raw 3-4 units over an arbitrary obstacle mask.
/// Returns a large sentinel everywhere when the mask is empty.
Raster<int> chamfer_34(const Raster<std::uint8_t>& obstacle);

}  // namespace explore
