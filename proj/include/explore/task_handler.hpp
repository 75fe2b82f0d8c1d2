#pragma once

#include <optional>
#include <span>
#include <vector>

#include "explore/config.hpp"
#include "explore/gvd.hpp"
#include "explore/policy.hpp"
#include "explore/topo_planner.hpp"

namespace explore {

/// Topological planning artifacts of one cycle.
struct GlobalPlan {
  GvdMatrix gvd;
  TopoGraph graph;
  MultiRootTree tree;
  std::optional<int> key;
  /// Candidate paths from the key node, best first.
  std::vector<PathCandidate> ranked;
};

/// Skeleton, graph, stem classification from the node nearest `run_start`,
/// fusion and path ranking. `ranked` is empty when the graph has no stem node
/// near the robot or no scoring path.
GlobalPlan plan_global(const OccupancyGrid& discovered, std::span<const Frontier> frontiers,
                       const Pose& robot, Point2 run_start, double main_path_fraction);

enum class HandlerMode { Local, GlobalPending, Done };
const char* to_string(HandlerMode m);

struct HandlerState {
  /// Cleared when exploration ends.
  bool active = true;
  HandlerMode mode = HandlerMode::Local;
  std::optional<ExplorationGoal> goal;
  /// Set when a topological goal was reached, cleared on the next dispatch.
  bool global_goal_reached = false;
  Blacklist blacklist;
  Point2 run_start{};
  /// Known-cell count when the last topological goal was dispatched.
  std::optional<std::size_t> known_at_last_global;
};

/// Position-only test, boundary inclusive. False without an active goal.
bool goal_reached(const HandlerState& state, const Pose& robot, double tol);

/// One planning cycle of the hierarchical strategy.
///
/// An active topological goal is kept until reached or its path runs out.
/// Otherwise local frontiers are detected; when none lies in the window or
/// the heading turned by at least the threshold over the trailing window,
/// the topological planner proposes the first node of the best stem path.
/// Frontiers fused into the key node itself compete as one-node paths whose
/// length is the robot's travel to them.
/// Without any reachable frontier the handler finishes. In the remaining
/// cases the oriented local selection is dispatched (a local goal is kept
/// while its target cell is unknown), and if that yields nothing usable the
/// cheapest-to-reach frontier is.
CycleResult tick(HandlerState& state, const SimState& sim, const ExplorationConfig& cfg,
                 bool path_exhausted);

class HierarchicalPolicy : public Policy {
 public:
  HierarchicalPolicy(ExplorationConfig cfg, Point2 run_start);

  std::string name() const override { return "hierarchical"; }
  CycleResult plan(const SimState& sim, bool path_exhausted) override;
  std::optional<ExplorationGoal> current_goal() const override { return state_.goal; }
  const HandlerState& state() const { return state_; }

 private:
  ExplorationConfig cfg_;
  HandlerState state_;
};

}  // namespace explore
