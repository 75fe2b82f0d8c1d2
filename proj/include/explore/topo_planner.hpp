#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "explore/gvd.hpp"
#include "explore/sim.hpp"

namespace explore {

struct MainPathResult {
  double length = 0.0;
  /// Main path node ids, deepest node first and the start node last.
  std::vector<int> nodes;
  /// Edge ids joining consecutive entries of `nodes`.
  std::vector<int> edges;
  /// Secondary paths whose length exceeded the threshold.
  std::vector<std::vector<int>> sub_paths;
};

/// Recursive longest-path DFS from `start`. Each node is expanded once (the
/// visited set is shared across the recursion, so cyclic graphs are searched
/// as a DFS tree). A child's candidate length is its own longest path plus the
/// connecting edge; the strictly longest candidate wins and losing candidates
/// above threshold_l are kept as sub-paths.
/// Throws MissingNode for an unknown start id.
MainPathResult main_path_search(const TopoGraph& graph, int start, double threshold_l);

/// Two passes of main_path_search: the first finds the main path length L,
/// the second records sub-paths longer than threshold_fraction * L.
MainPathResult find_main_path(const TopoGraph& graph, int start, double threshold_fraction = 0.3);

/// Node whose position is closest to p; lowest id on ties. -1 for an empty graph.
int nearest_node(const TopoGraph& graph, Point2 p);

/// Marks main-path nodes Stem and every other node Branch.
void classify_nodes(TopoGraph& graph, const MainPathResult& main);

/// Runs find_main_path in every connected component, starting from the
/// component's node nearest `anchor`, and marks the union of main paths Stem.
/// Returns the main paths, the anchor's component first.
std::vector<MainPathResult> classify_components(TopoGraph& graph, Point2 anchor,
                                                double threshold_fraction = 0.3);

struct RootRecord {
  int frontier_id = 0;
  std::size_t size = 0;
  /// Graph travel distance from the root to the node carrying the frontier.
  double distance = 0.0;
  int leaf_node = 0;
};

struct MultiRootTree {
  /// Stem node ids in graph order.
  std::vector<int> roots;
  std::map<int, std::vector<RootRecord>> records;

  std::span<const RootRecord> records_of(int root) const;
  std::size_t record_count() const;
};

/// Fuses every branch node into the stem it drains to. Each branch node's
/// parent is its predecessor on a shortest branch-only route to the nearest
/// stem; nodes are folded into their parents deepest first, carrying their
/// frontier records with the connecting edge length added.
/// Throws OrphanBranch when a branch node cannot reach any stem node.
MultiRootTree fuse_to_roots(const TopoGraph& graph);

/// Stem node nearest the robot (Euclidean); lowest id on ties.
std::optional<int> nearest_root(const MultiRootTree& tree, const TopoGraph& graph,
                                const Pose& robot);

/// Sum of frontier sizes scaled by exp(-d).
double node_score(std::span<const RootRecord> records, double d);

inline constexpr double kPathScoreFloor = 0.1;

struct PathCandidate {
  /// Stem nodes v1..vend, v1 adjacent to the key node.
  std::vector<int> nodes;
  /// Travel distance from the key node to each entry of `nodes`.
  std::vector<double> travel;
  double length = 0.0;
  double score = 0.0;
};

/// Every maximal simple path through stem-to-stem edges that starts at the
/// key node, scored as sum(node_score) / max(ln(l + 1), floor).
std::vector<PathCandidate> enumerate_stem_paths(const MultiRootTree& tree, const TopoGraph& graph,
                                                int key, double floor = kPathScoreFloor);

/// Candidates sorted by descending score, then lexicographically by node ids.
std::vector<PathCandidate> rank_paths(const MultiRootTree& tree, const TopoGraph& graph, int key,
                                      double floor = kPathScoreFloor);

/// Best path from the key node, or nullopt when no path has a positive score.
/// The goal node is the returned path's first node.
std::optional<PathCandidate> select_goal(const MultiRootTree& tree, const TopoGraph& graph,
                                         int key, double floor = kPathScoreFloor);

}  // namespace explore
