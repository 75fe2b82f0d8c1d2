#include "explore/raycast.hpp"

#include <limits>

#include "explore/error.hpp"

namespace explore {

RayHit raycast(const OccupancyGrid& grid, Point2 from, double heading, double max_range,
               const CellVisitor& visit) {
  const auto start = grid.world_to_cell(from);
  if (!start) throw Error(ErrorCode::OutOfBounds, "ray origin outside grid");
  if (!(max_range > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_range must be > 0");

  CellIndex cell = *start;
  if (grid.at(cell) == Cell::Occupied) return {0.0, RayTerminal::Obstacle, cell};
  if (visit) visit(cell, 0.0);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double res = grid.resolution();
  const double dx = std::cos(heading);
  const double dy = std::sin(heading);
  const double lx = from.x - grid.origin().x;
  const double ly = from.y - grid.origin().y;

  const int step_c = dx > 0 ? 1 : -1;
  const int step_r = dy > 0 ? 1 : -1;
  const double delta_x = dx != 0.0 ? res / std::abs(dx) : kInf;
  const double delta_y = dy != 0.0 ? res / std::abs(dy) : kInf;
  double next_x = kInf;
  double next_y = kInf;
  if (dx > 0) next_x = ((cell.col + 1) * res - lx) / dx;
  if (dx < 0) next_x = (lx - cell.col * res) / -dx;
  if (dy > 0) next_y = ((cell.row + 1) * res - ly) / dy;
  if (dy < 0) next_y = (ly - cell.row * res) / -dy;

  while (true) {
    const double t = std::min(next_x, next_y);
    if (t >= max_range) return {max_range, RayTerminal::MaxRange, {}};

    const bool corner = std::abs(next_x - next_y) <= 1e-9 * std::max(1.0, t);
    if (corner) {
      cell.col += step_c;
      cell.row += step_r;
      next_x += delta_x;
      next_y += delta_y;
    } else if (next_x < next_y) {
      cell.col += step_c;
      next_x += delta_x;
    } else {
      cell.row += step_r;
      next_y += delta_y;
    }

    if (!grid.contains(cell)) return {t, RayTerminal::MapEdge, {}};
    if (grid.at(cell) == Cell::Occupied) return {t, RayTerminal::Obstacle, cell};
    if (visit) visit(cell, t);
  }
}

}  // namespace explore
