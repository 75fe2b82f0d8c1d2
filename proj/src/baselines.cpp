#include "explore/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace explore {

namespace {

bool finished(const std::optional<ExplorationGoal>& goal, const SimState& sim, double tol,
              bool path_exhausted) {
  return goal && (path_exhausted || distance(goal->target.position(), sim.robot.position()) <= tol);
}

const ReachableFrontier* find_frontier(const std::vector<ReachableFrontier>& list, int id) {
  for (const auto& r : list) {
    if (r.frontier.id == id) return &r;
  }
  return nullptr;
}

/// Greedy pick over `reachable` with path check; unreachable targets are
/// blacklisted and the next pick is tried.
bool dispatch_greedy(const SimState& sim, const ExplorationConfig& cfg,
                     std::vector<ReachableFrontier> reachable, Blacklist& blacklist,
                     std::optional<ExplorationGoal>& goal, bool path_exhausted,
                     CycleResult& out) {
  std::vector<Frontier> pool;
  for (const auto& r : reachable) pool.push_back(r.frontier);
  while (!pool.empty()) {
    const auto pick = greedy_select(pool, sim.robot, cfg.w_d, cfg.w_s);
    const CellIndex target = find_frontier(reachable, pick->id)->target;
    if (goal && goal->cell == target && !path_exhausted) {
      out.action = CycleAction::Keep;
      out.goal = goal;
      return true;
    }
    if (auto path = path_to_cell(sim, target, cfg.inflation)) {
      auto g = make_goal(sim, target, GoalSource::GlobalFrontier);
      g.frontier_id = pick->id;
      goal = g;
      out.action = CycleAction::Dispatch;
      out.goal = g;
      out.path = std::move(*path);
      return true;
    }
    blacklist.add(target, sim.sim_time, cfg.blacklist_ttl);
    std::erase_if(pool, [&](const Frontier& f) { return f.id == pick->id; });
  }
  return false;
}

std::vector<ReachableFrontier> current_frontiers(const SimState& sim, const ExplorationConfig& cfg,
                                                 const Blacklist& blacklist) {
  const auto field = travel_cost_field(sim.discovered, sim.robot.position(), cfg.inflation);
  const auto frontiers = detect_frontiers(sim.discovered, cfg.min_frontier_size);
  return reachable_frontiers(frontiers, sim.discovered, field, blacklist, sim.sim_time);
}

}  // namespace

CycleResult GreedyPolicy::plan(const SimState& sim, bool path_exhausted) {
  CycleResult out;
  blacklist_.prune(sim.sim_time);
  if (done_) {
    out.action = CycleAction::Done;
    return out;
  }
  if (finished(goal_, sim, cfg_.goal_tolerance, path_exhausted)) goal_.reset();
  // Committed until the target stops being unknown: re-picking every cycle
  // can flip forever between two frontiers whose Euclidean order swaps as
  // the robot moves.
  if (goal_ && sim.discovered.at(goal_->cell) != Cell::Unknown) goal_.reset();

  auto reachable = current_frontiers(sim, cfg_, blacklist_);
  out.frontier_count = reachable.size();
  if (reachable.empty()) {
    done_ = true;
    goal_.reset();
    out.action = CycleAction::Done;
    return out;
  }
  if (goal_) {
    out.action = CycleAction::Keep;
    out.goal = goal_;
    return out;
  }
  if (dispatch_greedy(sim, cfg_, std::move(reachable), blacklist_, goal_, path_exhausted, out)) {
    return out;
  }
  goal_.reset();
  out.action = CycleAction::Idle;
  return out;
}

std::vector<RrtCandidate> rrt_candidates(const OccupancyGrid& discovered, Point2 root,
                                         std::mt19937_64& rng, int extensions, double step,
                                         double gain_radius, double w_d, double w_s,
                                         RrtTree* tree_out) {
  RrtTree tree;
  tree.nodes.push_back(root);
  tree.parent.push_back(-1);
  std::map<CellIndex, RrtCandidate> found;

  const double res = discovered.resolution();
  const double span_x = discovered.width() * res;
  const double span_y = discovered.height() * res;
  const double march = 0.05 * res;

  for (int k = 0; k < extensions; ++k) {
    const Point2 sample{discovered.origin().x + unit_uniform(rng) * span_x,
                        discovered.origin().y + unit_uniform(rng) * span_y};
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const double d = distance(tree.nodes[i], sample);
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    if (best <= 1e-12) continue;
    const Point2 from = tree.nodes[nearest];
    const double len = std::min(step, best);
    const Point2 dir{(sample.x - from.x) / best, (sample.y - from.y) / best};
    const Point2 to{from.x + dir.x * len, from.y + dir.y * len};

    bool blocked = false;
    std::optional<CellIndex> unknown;
    const int n = static_cast<int>(std::ceil(len / march));
    for (int s = 1; s <= n && !blocked && !unknown; ++s) {
      const double t = std::min(len, s * march);
      const auto cell = discovered.world_to_cell({from.x + dir.x * t, from.y + dir.y * t});
      if (!cell || discovered.at(*cell) == Cell::Occupied) {
        blocked = true;
      } else if (discovered.at(*cell) == Cell::Unknown) {
        unknown = cell;
      }
    }
    if (blocked) continue;
    if (unknown) {
      if (!found.contains(*unknown)) found[*unknown] = RrtCandidate{*unknown, 0, 0.0};
      continue;
    }
    tree.nodes.push_back(to);
    tree.parent.push_back(static_cast<int>(nearest));
  }

  std::vector<RrtCandidate> out;
  const int reach = static_cast<int>(std::ceil(gain_radius / res));
  for (auto& [cell, cand] : found) {
    const Point2 c = discovered.cell_center(cell);
    for (int dr = -reach; dr <= reach; ++dr) {
      for (int dc = -reach; dc <= reach; ++dc) {
        const CellIndex m{cell.col + dc, cell.row + dr};
        if (!discovered.contains(m) || discovered.at(m) != Cell::Unknown) continue;
        if (distance(discovered.cell_center(m), c) <= gain_radius + 1e-9) ++cand.gain;
      }
    }
    cand.cost = w_d * distance(root, c) - w_s * static_cast<double>(cand.gain);
    out.push_back(cand);
  }
  std::stable_sort(out.begin(), out.end(), [](const RrtCandidate& a, const RrtCandidate& b) {
    return a.cost < b.cost;
  });
  if (tree_out) *tree_out = std::move(tree);
  return out;
}

CycleResult RrtPolicy::plan(const SimState& sim, bool path_exhausted) {
  CycleResult out;
  blacklist_.prune(sim.sim_time);
  if (done_) {
    out.action = CycleAction::Done;
    return out;
  }
  if (finished(goal_, sim, cfg_.goal_tolerance, path_exhausted)) goal_.reset();

  auto candidates = rrt_candidates(sim.discovered, sim.robot.position(), rng_, cfg_.rrt_extensions,
                                   cfg_.rrt_step, cfg_.rrt_gain_radius, cfg_.w_d, cfg_.w_s);
  std::erase_if(candidates, [&](const RrtCandidate& c) {
    return blacklist_.contains(c.cell, sim.sim_time);
  });

  for (const auto& c : candidates) {
    if (goal_ && goal_->cell == c.cell && !path_exhausted) {
      empty_cycles_ = 0;
      out.action = CycleAction::Keep;
      out.goal = goal_;
      return out;
    }
    if (auto path = path_to_cell(sim, c.cell, cfg_.inflation)) {
      empty_cycles_ = 0;
      auto g = make_goal(sim, c.cell, GoalSource::RrtCandidate);
      goal_ = g;
      out.action = CycleAction::Dispatch;
      out.goal = g;
      out.path = std::move(*path);
      return out;
    }
    blacklist_.add(c.cell, sim.sim_time, cfg_.blacklist_ttl);
  }

  ++empty_cycles_;
  auto reachable = current_frontiers(sim, cfg_, blacklist_);
  out.frontier_count = reachable.size();
  if (reachable.empty() && empty_cycles_ >= cfg_.rrt_idle_cycles) {
    done_ = true;
    goal_.reset();
    out.action = CycleAction::Done;
    return out;
  }
  if (goal_ && !path_exhausted) {
    out.action = CycleAction::Keep;
    out.goal = goal_;
    return out;
  }
  if (dispatch_greedy(sim, cfg_, std::move(reachable), blacklist_, goal_, path_exhausted, out)) {
    return out;
  }
  goal_.reset();
  out.action = CycleAction::Idle;
  return out;
}

}  // namespace explore
