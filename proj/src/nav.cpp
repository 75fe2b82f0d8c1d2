#include "explore/nav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "explore/error.hpp"

namespace explore {

Raster<std::uint8_t> inflate(const OccupancyGrid& grid, double radius) {
  Raster<std::uint8_t> out(grid.width(), grid.height(), 0);
  const double r_cells = std::max(radius, 0.0) / grid.resolution();
  const int reach = static_cast<int>(std::floor(r_cells + 1e-9));
  const double r2 = r_cells * r_cells + 1e-9;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.cells()[i] != Cell::Occupied) continue;
    const auto c = grid.cell_of(i);
    for (int dr = -reach; dr <= reach; ++dr) {
      for (int dc = -reach; dc <= reach; ++dc) {
        const CellIndex n{c.col + dc, c.row + dr};
        if (out.contains(n) && dc * dc + dr * dr <= r2) out[n] = 1;
      }
    }
  }
  return out;
}

bool traversable(const OccupancyGrid& grid, const Raster<std::uint8_t>& inflated, CellIndex c) {
  return grid.contains(c) && grid.at(c) == Cell::Free && !inflated[c];
}

std::vector<Point2> remove_collinear(const std::vector<Point2>& points) {
  if (points.size() < 3) return points;
  std::vector<Point2> out{points.front()};
  for (std::size_t i = 1; i + 1 < points.size(); ++i) {
    const Point2 a = out.back();
    const Point2 b = points[i];
    const Point2 c = points[i + 1];
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    const double scale = std::max(distance(a, b) * distance(b, c), 1e-12);
    if (std::abs(cross) / scale > 1e-9) out.push_back(b);
  }
  out.push_back(points.back());
  return out;
}

namespace {

std::optional<CellIndex> snap_goal(const OccupancyGrid& grid, const Raster<std::uint8_t>& inflated,
                                   CellIndex goal) {
  const int reach = static_cast<int>(std::ceil(kGoalSnapRadius / grid.resolution()));
  const double limit = kGoalSnapRadius / grid.resolution() + 1e-9;
  std::optional<CellIndex> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      const CellIndex n{goal.col + dc, goal.row + dr};
      const double d = std::hypot(dc, dr);
      if (d > limit || !traversable(grid, inflated, n)) continue;
      if (d < best_d || (d == best_d && n < *best)) {
        best_d = d;
        best = n;
      }
    }
  }
  return best;
}

}  // namespace

std::optional<PlannedPath> plan_path(const OccupancyGrid& grid, Point2 from, Point2 to,
                                     double inflation) {
  const auto start_cell = grid.world_to_cell(from);
  if (!start_cell || grid.at(*start_cell) != Cell::Free) {
    throw Error(ErrorCode::InvalidStart, "path start is not on a free cell");
  }
  const auto raw_goal = grid.world_to_cell(to);
  if (!raw_goal) return std::nullopt;

  const auto inflated = inflate(grid, inflation);
  CellIndex goal = *raw_goal;
  const Cell goal_state = grid.at(goal);
  if (goal_state == Cell::Occupied || (goal_state == Cell::Free && inflated[goal])) {
    const auto snapped = snap_goal(grid, inflated, goal);
    if (!snapped) return std::nullopt;
    goal = *snapped;
  }

  const CellIndex start = *start_cell;
  PlannedPath path;
  if (start == goal) {
    path.cells = {start};
    path.points = {grid.cell_center(start)};
    return path;
  }

  const std::size_t n = grid.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> g(n, kInf);
  std::vector<std::int64_t> parent(n, -1);
  std::vector<char> closed(n, 0);

  auto octile = [&](CellIndex c) {
    const double dx = std::abs(c.col - goal.col);
    const double dy = std::abs(c.row - goal.row);
    return std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy);
  };
  // The start cell may sit inside the inflation band; it is always
  // expandable. The goal may be Unknown but is never expanded.
  auto passable = [&](CellIndex c) { return c == goal || traversable(grid, inflated, c); };

  using Entry = std::tuple<double, std::uint64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t counter = 0;
  const std::size_t si = grid.raster().index(start);
  const std::size_t gi = grid.raster().index(goal);
  g[si] = 0.0;
  open.push({octile(start), counter++, si});

  while (!open.empty()) {
    const auto [f, order, ui] = open.top();
    open.pop();
    if (closed[ui]) continue;
    closed[ui] = 1;
    if (ui == gi) break;
    const CellIndex u = grid.cell_of(ui);
    for (int k = 0; k < 8; ++k) {
      const CellIndex v{u.col + kRingDc[k], u.row + kRingDr[k]};
      if (!grid.contains(v) || !passable(v)) continue;
      const bool diagonal = kRingDc[k] != 0 && kRingDr[k] != 0;
      if (diagonal && (!traversable(grid, inflated, {u.col + kRingDc[k], u.row}) ||
                       !traversable(grid, inflated, {u.col, u.row + kRingDr[k]}))) {
        continue;
      }
      const std::size_t vi = grid.raster().index(v);
      if (closed[vi]) continue;
      const double ng = g[ui] + (diagonal ? std::numbers::sqrt2 : 1.0);
      if (ng < g[vi]) {
        g[vi] = ng;
        parent[vi] = static_cast<std::int64_t>(ui);
        open.push({ng + octile(v), counter++, vi});
      }
    }
  }
  if (!closed[gi]) return std::nullopt;

  for (auto i = static_cast<std::int64_t>(gi); i >= 0; i = parent[i]) {
    path.cells.push_back(grid.cell_of(static_cast<std::size_t>(i)));
  }
  std::reverse(path.cells.begin(), path.cells.end());
  std::vector<Point2> centers;
  centers.reserve(path.cells.size());
  for (const auto& c : path.cells) centers.push_back(grid.cell_center(c));
  path.points = remove_collinear(centers);
  path.cost = g[gi] * grid.resolution();
  return path;
}

}  // namespace explore
