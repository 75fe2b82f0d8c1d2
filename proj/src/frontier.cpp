#include "explore/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace explore {

bool is_frontier_cell(const OccupancyGrid& grid, CellIndex c) {
  if (grid.at(c) != Cell::Unknown) return false;
  for (int k = 0; k < 4; ++k) {
    if (grid.at_or({c.col + k4Dc[k], c.row + k4Dr[k]}, Cell::Unknown) == Cell::Free) return true;
  }
  return false;
}

std::vector<Frontier> detect_frontiers(const OccupancyGrid& grid, std::size_t min_size) {
  Raster<std::uint8_t> is_frontier(grid.width(), grid.height(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    is_frontier[i] = is_frontier_cell(grid, grid.cell_of(i));
  }

  std::vector<Frontier> out;
  Raster<std::uint8_t> seen(grid.width(), grid.height(), 0);
  std::vector<CellIndex> queue;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!is_frontier[i] || seen[i]) continue;
    queue.clear();
    queue.push_back(grid.cell_of(i));
    seen[i] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto c = queue[head];
      for (int k = 0; k < 8; ++k) {
        const CellIndex n{c.col + kRingDc[k], c.row + kRingDr[k]};
        if (grid.contains(n) && is_frontier[n] && !seen[n]) {
          seen[n] = 1;
          queue.push_back(n);
        }
      }
    }
    if (queue.size() < min_size || queue.empty()) continue;

    Frontier f;
    f.id = static_cast<int>(out.size());
    f.cells = queue;
    std::sort(f.cells.begin(), f.cells.end());
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& c : f.cells) {
      const auto p = grid.cell_center(c);
      sx += p.x;
      sy += p.y;
    }
    const auto n = static_cast<double>(f.cells.size());
    f.centroid = {sx / n, sy / n};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : f.cells) {
      const double d = distance(grid.cell_center(c), f.centroid);
      if (d < best) {
        best = d;
        f.anchor = c;
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

FrontierCosts frontier_costs(const Frontier& f, const Pose& robot) {
  const double dx = f.centroid.x - robot.x;
  const double dy = f.centroid.y - robot.y;
  FrontierCosts c;
  c.distance = std::hypot(dx, dy);
  c.size = static_cast<double>(f.size());
  c.steering = c.distance > 0.0 ? std::abs(wrap_angle(std::atan2(dy, dx) - robot.theta)) : 0.0;
  return c;
}

std::optional<Frontier> greedy_select(std::span<const Frontier> frontiers, const Pose& robot,
                                      double w_d, double w_s) {
  const Frontier* best = nullptr;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& f : frontiers) {
    const auto c = frontier_costs(f, robot);
    const double cost = w_d * c.distance - w_s * c.size;
    if (!best || cost < best_cost || (cost == best_cost && f.id < best->id)) {
      best = &f;
      best_cost = cost;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

std::vector<FrontierCosts> normalize_costs(std::span<const FrontierCosts> raw) {
  std::vector<FrontierCosts> out(raw.begin(), raw.end());
  if (raw.empty()) return out;

  auto scale = [&](double FrontierCosts::*field) {
    double lo = raw.front().*field;
    double hi = lo;
    for (const auto& c : raw) {
      lo = std::min(lo, c.*field);
      hi = std::max(hi, c.*field);
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      out[i].*field = span > 0.0 ? (raw[i].*field - lo) / span : 0.0;
    }
  };
  scale(&FrontierCosts::distance);
  scale(&FrontierCosts::size);
  scale(&FrontierCosts::steering);
  return out;
}

std::optional<std::size_t> oriented_argmin(std::span<const FrontierCosts> raw) {
  if (raw.empty()) return std::nullopt;
  const auto norm = normalize_costs(raw);
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < norm.size(); ++i) {
    const double cost = norm[i].distance - norm[i].size + norm[i].steering;
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }
  return best;
}

std::vector<Frontier> frontiers_in_window(std::span<const Frontier> frontiers,
                                          const LocalWindow& window) {
  std::vector<Frontier> out;
  for (const auto& f : frontiers) {
    if (window.contains(f.centroid)) out.push_back(f);
  }
  std::sort(out.begin(), out.end(), [](const Frontier& a, const Frontier& b) { return a.id < b.id; });
  return out;
}

std::optional<Frontier> oriented_select(std::span<const Frontier> frontiers, const Pose& robot,
                                        const LocalWindow& window) {
  const auto candidates = frontiers_in_window(frontiers, window);
  std::vector<FrontierCosts> raw;
  raw.reserve(candidates.size());
  for (const auto& f : candidates) raw.push_back(frontier_costs(f, robot));
  const auto pick = oriented_argmin(raw);
  if (!pick) return std::nullopt;
  return candidates[*pick];
}

}  // namespace explore
