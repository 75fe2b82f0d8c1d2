#include "explore/task_handler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "explore/nav.hpp"

namespace explore {

GlobalPlan plan_global(const OccupancyGrid& discovered, std::span<const Frontier> frontiers,
                       const Pose& robot, Point2 run_start, double main_path_fraction) {
  GlobalPlan plan;
  plan.gvd = extract_gvd(discovered);
  plan.graph = build_graph(plan.gvd, frontiers, discovered);
  if (plan.graph.nodes.empty()) return plan;
  classify_components(plan.graph, run_start, main_path_fraction);
  plan.tree = fuse_to_roots(plan.graph);
  plan.key = nearest_root(plan.tree, plan.graph, robot);
  if (plan.key) plan.ranked = rank_paths(plan.tree, plan.graph, *plan.key);
  return plan;
}

const char* to_string(HandlerMode m) {
  switch (m) {
    case HandlerMode::Local: return "local";
    case HandlerMode::GlobalPending: return "global_pending";
    case HandlerMode::Done: return "done";
  }
  return "unknown";
}

bool goal_reached(const HandlerState& state, const Pose& robot, double tol) {
  return state.goal && distance(state.goal->target.position(), robot.position()) <= tol;
}

namespace {

std::size_t known_cells(const OccupancyGrid& grid) {
  return grid.size() - grid.count(Cell::Unknown);
}

void dispatch(HandlerState& state, CycleResult& out, ExplorationGoal goal,
              std::vector<Point2> path) {
  state.goal = goal;
  state.mode =
      goal.source == GoalSource::LocalFrontier ? HandlerMode::Local : HandlerMode::GlobalPending;
  if (goal.source == GoalSource::GlobalTopo) state.global_goal_reached = false;
  out.action = CycleAction::Dispatch;
  out.goal = std::move(goal);
  out.path = std::move(path);
}

struct Cycle {
  HandlerState& state;
  const SimState& sim;
  const ExplorationConfig& cfg;
  CycleResult& out;
  std::vector<ReachableFrontier> reachable;
  std::vector<Frontier> pool;
  bool path_exhausted = false;

  const ReachableFrontier* lookup(int frontier_id) const {
    for (const auto& r : reachable) {
      if (r.frontier.id == frontier_id) return &r;
    }
    return nullptr;
  }

  bool try_local(std::vector<Frontier> candidates) {
    const double now = sim.sim_time;
    // Re-picking every cycle can alternate between two frontiers whose paths
    // first lead away from them, slowly enough to never trip the heading filter.
    if (state.goal && state.goal->source == GoalSource::LocalFrontier && !path_exhausted &&
        sim.discovered.at(state.goal->cell) == Cell::Unknown) {
      out.action = CycleAction::Keep;
      out.goal = state.goal;
      return true;
    }
    while (!candidates.empty()) {
      const auto pick = oriented_select(candidates, sim.robot,
                                        LocalWindow{sim.robot.position(), cfg.window_half_extent});
      if (!pick) return false;
      const auto* r = lookup(pick->id);
      const CellIndex target = r->target;
      if (state.goal && state.goal->source == GoalSource::LocalFrontier &&
          state.goal->cell == target && !path_exhausted) {
        out.action = CycleAction::Keep;
        out.goal = state.goal;
        return true;
      }
      if (auto path = path_to_cell(sim, target, cfg.inflation)) {
        auto goal = make_goal(sim, target, GoalSource::LocalFrontier);
        goal.frontier_id = pick->id;
        dispatch(state, out, goal, std::move(*path));
        return true;
      }
      state.blacklist.add(target, now, cfg.blacklist_ttl);
      std::erase_if(candidates, [&](const Frontier& f) { return f.id == pick->id; });
    }
    return false;
  }

  /// Frontiers fused into the key node sit on no path leaving it, so each is
  /// scored as a one-node path whose length is the robot's travel to it. When
  /// the best of them beats every stem path, it becomes the goal.
  bool try_descend(const GlobalPlan& plan) {
    std::vector<std::pair<double, const ReachableFrontier*>> own;
    for (const auto& rec : plan.tree.records_of(*plan.key)) {
      const auto* r = lookup(rec.frontier_id);
      if (!r) continue;
      const RootRecord as_node{rec.frontier_id, rec.size, r->travel, rec.leaf_node};
      const double score = node_score(std::span(&as_node, 1), r->travel) /
                           std::max(std::log(r->travel + 1.0), kPathScoreFloor);
      own.emplace_back(score, r);
    }
    std::stable_sort(own.begin(), own.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second->frontier.id < b.second->frontier.id;
    });
    const double best = plan.ranked.empty() ? 0.0 : plan.ranked.front().score;
    for (const auto& [score, r] : own) {
      if (!(score > 0.0) || score < best) return false;
      if (auto path = path_to_cell(sim, r->target, cfg.inflation)) {
        auto goal = make_goal(sim, r->target, GoalSource::GlobalFrontier);
        goal.frontier_id = r->frontier.id;
        dispatch(state, out, goal, std::move(*path));
        return true;
      }
      state.blacklist.add(r->target, sim.sim_time, cfg.blacklist_ttl);
    }
    return false;
  }

  bool try_global() {
    const double now = sim.sim_time;
    const auto plan = plan_global(sim.discovered, pool, sim.robot, state.run_start,
                                  cfg.main_path_fraction);
    if (plan.key && try_descend(plan)) return true;
    const std::size_t known = known_cells(sim.discovered);
    const bool stalled = state.known_at_last_global && *state.known_at_last_global == known;
    for (const auto& cand : plan.ranked) {
      if (!(cand.score > 0.0)) break;
      const int node = cand.nodes.front();
      const auto& tn = plan.graph.nodes[node];
      if (state.blacklist.contains(tn.cell, now)) continue;
      if (distance(tn.position, sim.robot.position()) <= cfg.goal_tolerance) continue;
      // Nothing was learned since the last topological goal: going to another
      // node would only shuttle along the skeleton.
      if (stalled) return false;
      auto path = path_to_cell(sim, tn.cell, cfg.inflation);
      if (!path) {
        state.blacklist.add(tn.cell, now, cfg.blacklist_ttl);
        continue;
      }
      auto goal = make_goal(sim, tn.cell, GoalSource::GlobalTopo);
      goal.node_id = node;
      const Point2 toward = cand.nodes.size() > 1 ? plan.graph.nodes[cand.nodes[1]].position
                                                   : tn.position;
      if (toward != tn.position) {
        goal.target.theta = wrap_angle(std::atan2(toward.y - tn.position.y, toward.x - tn.position.x));
      }
      state.known_at_last_global = known;
      dispatch(state, out, goal, std::move(*path));
      return true;
    }
    return false;
  }

  bool try_cheapest() {
    const double now = sim.sim_time;
    auto order = reachable;
    std::stable_sort(order.begin(), order.end(),
                     [](const ReachableFrontier& a, const ReachableFrontier& b) {
                       return a.travel < b.travel;
                     });
    for (const auto& r : order) {
      if (auto path = path_to_cell(sim, r.target, cfg.inflation)) {
        auto goal = make_goal(sim, r.target, GoalSource::GlobalFrontier);
        goal.frontier_id = r.frontier.id;
        dispatch(state, out, goal, std::move(*path));
        return true;
      }
      state.blacklist.add(r.target, now, cfg.blacklist_ttl);
    }
    return false;
  }
};

}  // namespace

CycleResult tick(HandlerState& state, const SimState& sim, const ExplorationConfig& cfg,
                 bool path_exhausted) {
  CycleResult out;
  const double now = sim.sim_time;
  state.blacklist.prune(now);
  if (!state.active || state.mode == HandlerMode::Done) {
    out.action = CycleAction::Done;
    return out;
  }

  if (state.goal && (goal_reached(state, sim.robot, cfg.goal_tolerance) || path_exhausted)) {
    if (state.goal->source == GoalSource::GlobalTopo) state.global_goal_reached = true;
    state.goal.reset();
    state.mode = HandlerMode::Local;
  }
  // A fallback frontier goal is dropped once its target is no longer unknown.
  if (state.goal && state.goal->source == GoalSource::GlobalFrontier &&
      sim.discovered.at(state.goal->cell) != Cell::Unknown) {
    state.goal.reset();
    state.mode = HandlerMode::Local;
  }

  Cycle cycle{state, sim, cfg, out, {}, {}, path_exhausted};
  const auto field = travel_cost_field(sim.discovered, sim.robot.position(), cfg.inflation);
  const auto frontiers = detect_frontiers(sim.discovered, cfg.min_frontier_size);
  cycle.reachable = reachable_frontiers(frontiers, sim.discovered, field, state.blacklist, now);
  for (const auto& r : cycle.reachable) cycle.pool.push_back(r.frontier);
  out.frontier_count = cycle.reachable.size();
  out.heading_change = heading_change(sim, cfg.heading_window);

  if (state.mode == HandlerMode::GlobalPending && state.goal) {
    out.action = CycleAction::Keep;
    out.goal = state.goal;
    return out;
  }

  const auto in_window =
      frontiers_in_window(cycle.pool, LocalWindow{sim.robot.position(), cfg.window_half_extent});
  const double threshold = cfg.heading_threshold_deg * std::numbers::pi / 180.0;
  out.filter_fired = in_window.empty() || std::abs(out.heading_change) >= threshold;

  if (cycle.reachable.empty()) {
    state.active = false;
    state.mode = HandlerMode::Done;
    state.goal.reset();
    out.action = CycleAction::Done;
    return out;
  }

  if (out.filter_fired) {
    if (cycle.try_global() || cycle.try_local(in_window)) return out;
  } else {
    if (cycle.try_local(in_window) || cycle.try_global()) return out;
  }
  if (cycle.try_cheapest()) return out;

  state.goal.reset();
  state.mode = HandlerMode::Local;
  out.action = CycleAction::Idle;
  return out;
}

HierarchicalPolicy::HierarchicalPolicy(ExplorationConfig cfg, Point2 run_start)
    : cfg_(std::move(cfg)) {
  state_.run_start = run_start;
}

CycleResult HierarchicalPolicy::plan(const SimState& sim, bool path_exhausted) {
  return tick(state_, sim, cfg_, path_exhausted);
}

}  // namespace explore
