#include "explore/policy.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "explore/baselines.hpp"
#include "explore/error.hpp"
#include "explore/nav.hpp"
#include "explore/task_handler.hpp"

namespace explore {

const char* to_string(GoalSource s) {
  switch (s) {
    case GoalSource::LocalFrontier: return "local_frontier";
    case GoalSource::GlobalTopo: return "global_topo";
    case GoalSource::GlobalFrontier: return "global_frontier";
    case GoalSource::RrtCandidate: return "rrt_candidate";
  }
  return "unknown";
}

Stage stage_of(GoalSource s) {
  return s == GoalSource::LocalFrontier ? Stage::Local : Stage::Global;
}

void Blacklist::add(CellIndex c, double now, double ttl) { expiry_[c] = now + ttl; }

bool Blacklist::contains(CellIndex c, double now) const {
  const auto it = expiry_.find(c);
  return it != expiry_.end() && now < it->second;
}

void Blacklist::prune(double now) {
  std::erase_if(expiry_, [now](const auto& entry) { return now >= entry.second; });
}

Raster<double> travel_cost_field(const OccupancyGrid& grid, Point2 from, double inflation) {
  const auto start = grid.world_to_cell(from);
  if (!start || grid.at(*start) != Cell::Free) {
    throw Error(ErrorCode::InvalidStart, "cost field origin is not on a free cell");
  }
  const auto inflated = inflate(grid, inflation);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Raster<double> cost(grid.width(), grid.height(), kInf);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  cost[*start] = 0.0;
  open.push({0.0, grid.index(*start)});
  while (!open.empty()) {
    const auto [d, ui] = open.top();
    open.pop();
    if (d > cost[ui]) continue;
    const CellIndex u = grid.cell_of(ui);
    // Unknown cells are terminals, except nothing else is ever expanded
    // from them.
    if (ui != grid.index(*start) && !traversable(grid, inflated, u)) continue;
    for (int k = 0; k < 8; ++k) {
      const CellIndex v{u.col + kRingDc[k], u.row + kRingDr[k]};
      if (!grid.contains(v)) continue;
      const Cell state = grid.at(v);
      if (!(traversable(grid, inflated, v) || state == Cell::Unknown)) continue;
      const bool diagonal = kRingDc[k] != 0 && kRingDr[k] != 0;
      if (diagonal && (!traversable(grid, inflated, {u.col + kRingDc[k], u.row}) ||
                       !traversable(grid, inflated, {u.col, u.row + kRingDr[k]}))) {
        continue;
      }
      const double nd = d + (diagonal ? std::numbers::sqrt2 : 1.0) * grid.resolution();
      if (nd < cost[v]) {
        cost[v] = nd;
        open.push({nd, grid.index(v)});
      }
    }
  }
  return cost;
}

std::optional<CellIndex> frontier_target(const Frontier& f, const OccupancyGrid& grid,
                                         const Raster<double>& field) {
  std::optional<CellIndex> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : f.cells) {
    if (!std::isfinite(field[c])) continue;
    const double d = distance(grid.cell_center(c), f.centroid);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<ReachableFrontier> reachable_frontiers(std::span<const Frontier> frontiers,
                                                   const OccupancyGrid& grid,
                                                   const Raster<double>& field,
                                                   const Blacklist& blacklist, double now) {
  std::vector<ReachableFrontier> out;
  for (const auto& f : frontiers) {
    const auto target = frontier_target(f, grid, field);
    if (!target || blacklist.contains(*target, now)) continue;
    out.push_back({f, *target, field[*target]});
  }
  return out;
}

std::optional<std::vector<Point2>> path_to_cell(const SimState& sim, CellIndex cell,
                                                double inflation) {
  const auto planned =
      plan_path(sim.discovered, sim.robot.position(), sim.discovered.cell_center(cell), inflation);
  if (!planned) return std::nullopt;
  const auto& cells = planned->cells;
  if (sim.discovered.at(cells.back()) == Cell::Free || cells.size() < 2) return planned->points;
  // An unknown goal cell may hide an obstacle: stop on the last free cell.
  std::vector<Point2> centers;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    centers.push_back(sim.discovered.cell_center(cells[i]));
  }
  return remove_collinear(centers);
}

ExplorationGoal make_goal(const SimState& sim, CellIndex cell, GoalSource source) {
  ExplorationGoal g;
  const Point2 p = sim.discovered.cell_center(cell);
  const double bearing = std::atan2(p.y - sim.robot.y, p.x - sim.robot.x);
  g.target = {p.x, p.y, wrap_angle(bearing)};
  g.source = source;
  g.issued_at = sim.sim_time;
  g.cell = cell;
  return g;
}

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names = {"hierarchical", "greedy", "rrt"};
  return names;
}

std::unique_ptr<Policy> make_policy(const std::string& name, const ExplorationConfig& cfg,
                                    std::uint64_t seed, Point2 run_start) {
  if (name == "hierarchical") return std::make_unique<HierarchicalPolicy>(cfg, run_start);
  if (name == "greedy") return std::make_unique<GreedyPolicy>(cfg);
  if (name == "rrt") return std::make_unique<RrtPolicy>(cfg, seed);
  throw Error(ErrorCode::InvalidArgument, "unknown policy '" + name + "'");
}

}  // namespace explore
