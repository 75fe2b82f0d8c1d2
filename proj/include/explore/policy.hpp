#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "explore/config.hpp"
#include "explore/frontier.hpp"
#include "explore/grid.hpp"
#include "explore/sim.hpp"

namespace explore {

enum class GoalSource {
  LocalFrontier,
  GlobalTopo,
  /// Frontier with the lowest travel cost, used when neither the local
  /// window nor the topological graph produces a usable goal.
  GlobalFrontier,
  RrtCandidate,
};
const char* to_string(GoalSource s);

struct ExplorationGoal {
  Pose target;
  GoalSource source = GoalSource::LocalFrontier;
  double issued_at = 0.0;
  CellIndex cell{};
  int frontier_id = -1;
  int node_id = -1;
};

Stage stage_of(GoalSource s);

/// Cells that recently failed as goals; entries expire after their TTL.
class Blacklist {
 public:
  void add(CellIndex c, double now, double ttl);
  bool contains(CellIndex c, double now) const;
  void prune(double now);
  std::size_t size() const { return expiry_.size(); }

 private:
  std::map<CellIndex, double> expiry_;
};

enum class CycleAction {
  Keep,      // follow the current path unchanged
  Dispatch,  // replace the path with a new one
  Idle,      // drop any path and wait
  Done,
};

struct CycleResult {
  CycleAction action = CycleAction::Keep;
  std::optional<ExplorationGoal> goal;
  std::vector<Point2> path;
  bool filter_fired = false;
  double heading_change = 0.0;
  std::size_t frontier_count = 0;
};

/// One exploration strategy driven by the runner's planning cycle.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// Called once per planning cycle. `path_exhausted` is true when the
  /// runner has no waypoints left.
  virtual CycleResult plan(const SimState& sim, bool path_exhausted) = 0;
  virtual std::optional<ExplorationGoal> current_goal() const = 0;
};

/// Travel cost in meters from `from` to every cell, mirroring plan_path:
/// 8-connected moves over Free non-inflated cells, no corner cutting.
/// Unknown cells receive a cost when entered but are never expanded.
/// Unreachable cells hold +infinity.
/// Throws InvalidStart when `from` is not on a Free cell.
Raster<double> travel_cost_field(const OccupancyGrid& grid, Point2 from, double inflation);

/// Reachable member cell nearest the frontier centroid (row-major first on
/// ties), or nullopt when no member cell is reachable.
std::optional<CellIndex> frontier_target(const Frontier& f, const OccupancyGrid& grid,
                                         const Raster<double>& field);

struct ReachableFrontier {
  Frontier frontier;
  CellIndex target{};
  double travel = 0.0;
};

/// Frontiers with a reachable, non-blacklisted target, in id order.
std::vector<ReachableFrontier> reachable_frontiers(std::span<const Frontier> frontiers,
                                                   const OccupancyGrid& grid,
                                                   const Raster<double>& field,
                                                   const Blacklist& blacklist, double now);

/// Plans a path from the robot to `cell`. nullopt when unreachable.
std::optional<std::vector<Point2>> path_to_cell(const SimState& sim, CellIndex cell,
                                                double inflation);

ExplorationGoal make_goal(const SimState& sim, CellIndex cell, GoalSource source);

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Builds "hierarchical", "greedy" or "rrt". Throws InvalidArgument otherwise.
std::unique_ptr<Policy> make_policy(const std::string& name, const ExplorationConfig& cfg,
                                    std::uint64_t seed, Point2 run_start);

const std::vector<std::string>& policy_names();

}  // namespace explore
