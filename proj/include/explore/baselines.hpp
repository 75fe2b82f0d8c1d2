#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "explore/config.hpp"
#include "explore/policy.hpp"

namespace explore {

/// Greedy frontier exploration: the frontier minimising w_d * Euclidean
/// distance - w_s * size over the whole map is dispatched and kept until it is
/// reached, its path runs out or its target cell is observed.
/// Finishes when no reachable frontier remains.
class GreedyPolicy : public Policy {
 public:
  explicit GreedyPolicy(ExplorationConfig cfg) : cfg_(std::move(cfg)) {}

  std::string name() const override { return "greedy"; }
  CycleResult plan(const SimState& sim, bool path_exhausted) override;
  std::optional<ExplorationGoal> current_goal() const override { return goal_; }

 private:
  ExplorationConfig cfg_;
  std::optional<ExplorationGoal> goal_;
  Blacklist blacklist_;
  bool done_ = false;
};

struct RrtCandidate {
  CellIndex cell{};
  /// Unknown cells within the gain radius of the cell center.
  std::size_t gain = 0;
  double cost = 0.0;
};

struct RrtTree {
  std::vector<Point2> nodes;
  std::vector<int> parent;
};

/// Grows a fresh tree from `root` with `extensions` attempts: each draws a
/// uniform point over the map bounds and steps at most `step` from the
/// nearest node toward it. A step that runs into an Occupied cell or off the
/// map is dropped; one that enters an Unknown cell yields that cell as a
/// candidate and is not added to the tree.
/// Candidates are unique by cell and sorted by ascending cost
/// w_d * distance - w_s * gain, then row-major cell order.
std::vector<RrtCandidate> rrt_candidates(const OccupancyGrid& discovered, Point2 root,
                                         std::mt19937_64& rng, int extensions, double step,
                                         double gain_radius, double w_d, double w_s,
                                         RrtTree* tree = nullptr);

/// Simplified randomised-tree frontier exploration. The tree is rebuilt every
/// cycle and the cheapest candidate is dispatched; when a cycle finds no
/// candidate while frontiers remain, the greedy frontier is used instead.
/// Finishes after `rrt_idle_cycles` consecutive empty cycles with no
/// reachable frontier left.
class RrtPolicy : public Policy {
 public:
  RrtPolicy(ExplorationConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {}

  std::string name() const override { return "rrt"; }
  CycleResult plan(const SimState& sim, bool path_exhausted) override;
  std::optional<ExplorationGoal> current_goal() const override { return goal_; }

 private:
  ExplorationConfig cfg_;
  std::mt19937_64 rng_;
  std::optional<ExplorationGoal> goal_;
  Blacklist blacklist_;
  int empty_cycles_ = 0;
  bool done_ = false;
};

}  // namespace explore
