#include "explore/topo_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>

#include "explore/error.hpp"

namespace explore {

namespace {

struct MainPathDfs {
  const TopoGraph& graph;
  double threshold;
  std::vector<char> visited;
  std::vector<std::vector<int>> sub_paths;

  struct Partial {
    double length = 0.0;
    std::vector<int> nodes;
    std::vector<int> edges;
  };

  Partial run(int current) {
    visited[current] = 1;
    Partial best;
    for (int e : graph.adjacency[current]) {
      const int next = graph.edges[e].other(current);
      if (visited[next]) continue;
      Partial child = run(next);
      const double candidate = child.length + graph.edges[e].length;
      if (candidate > best.length) {
        best.length = candidate;
        best.nodes = std::move(child.nodes);
        best.edges = std::move(child.edges);
        best.edges.push_back(e);
      } else if (candidate > threshold) {
        sub_paths.push_back(std::move(child.nodes));
      }
    }
    best.nodes.push_back(current);
    return best;
  }
};

}  // namespace

MainPathResult main_path_search(const TopoGraph& graph, int start, double threshold_l) {
  if (!graph.has_node(start)) {
    throw Error(ErrorCode::MissingNode, "start node " + std::to_string(start) + " not in graph");
  }
  MainPathDfs dfs{graph, threshold_l, std::vector<char>(graph.nodes.size(), 0), {}};
  auto best = dfs.run(start);
  return {best.length, std::move(best.nodes), std::move(best.edges), std::move(dfs.sub_paths)};
}

MainPathResult find_main_path(const TopoGraph& graph, int start, double threshold_fraction) {
  const auto first = main_path_search(graph, start, std::numeric_limits<double>::infinity());
  return main_path_search(graph, start, threshold_fraction * first.length);
}

int nearest_node(const TopoGraph& graph, Point2 p) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& n : graph.nodes) {
    const double d = distance(n.position, p);
    if (d < best_d) {
      best_d = d;
      best = n.id;
    }
  }
  return best;
}

void classify_nodes(TopoGraph& graph, const MainPathResult& main) {
  for (auto& n : graph.nodes) n.kind = NodeKind::Branch;
  for (int id : main.nodes) graph.nodes[id].kind = NodeKind::Stem;
}

std::vector<MainPathResult> classify_components(TopoGraph& graph, Point2 anchor,
                                                double threshold_fraction) {
  const int n = static_cast<int>(graph.nodes.size());
  std::vector<int> component(n, -1);
  std::vector<std::vector<int>> members;
  for (int s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    const int id = static_cast<int>(members.size());
    members.emplace_back();
    std::vector<int> stack{s};
    component[s] = id;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      members[id].push_back(u);
      for (int e : graph.adjacency[u]) {
        const int v = graph.edges[e].other(u);
        if (component[v] < 0) {
          component[v] = id;
          stack.push_back(v);
        }
      }
    }
  }

  struct Start {
    double dist;
    int node;
  };
  std::vector<Start> starts;
  for (const auto& group : members) {
    Start best{std::numeric_limits<double>::infinity(), -1};
    for (int u : group) {
      const double d = distance(graph.nodes[u].position, anchor);
      if (d < best.dist || (d == best.dist && u < best.node)) best = {d, u};
    }
    starts.push_back(best);
  }
  std::sort(starts.begin(), starts.end(), [](const Start& a, const Start& b) {
    return std::tie(a.dist, a.node) < std::tie(b.dist, b.node);
  });

  for (auto& node : graph.nodes) node.kind = NodeKind::Branch;
  std::vector<MainPathResult> out;
  for (const auto& s : starts) {
    auto main = find_main_path(graph, s.node, threshold_fraction);
    for (int id : main.nodes) graph.nodes[id].kind = NodeKind::Stem;
    out.push_back(std::move(main));
  }
  return out;
}

std::span<const RootRecord> MultiRootTree::records_of(int root) const {
  const auto it = records.find(root);
  if (it == records.end()) return {};
  return it->second;
}

std::size_t MultiRootTree::record_count() const {
  std::size_t n = 0;
  for (const auto& [root, list] : records) n += list.size();
  return n;
}

MultiRootTree fuse_to_roots(const TopoGraph& graph) {
  const int n = static_cast<int>(graph.nodes.size());
  MultiRootTree tree;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<int> parent(n, -1);
  std::vector<int> parent_edge(n, -1);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (const auto& node : graph.nodes) {
    if (node.kind != NodeKind::Stem) continue;
    tree.roots.push_back(node.id);
    tree.records[node.id];
    dist[node.id] = 0.0;
    open.push({0.0, node.id});
  }
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    for (int e : graph.adjacency[u]) {
      const int v = graph.edges[e].other(u);
      if (graph.nodes[v].kind == NodeKind::Stem) continue;
      const double nd = d + graph.edges[e].length;
      if (nd < dist[v]) {
        dist[v] = nd;
        parent[v] = u;
        parent_edge[v] = e;
        open.push({nd, v});
      }
    }
  }
  for (const auto& node : graph.nodes) {
    if (node.kind == NodeKind::Branch && parent[node.id] < 0) {
      throw Error(ErrorCode::OrphanBranch,
                  "branch node " + std::to_string(node.id) + " is not connected to a stem node");
    }
  }

  // Every node starts holding its own frontiers at distance 0 from itself.
  std::vector<std::vector<RootRecord>> held(n);
  for (const auto& node : graph.nodes) {
    for (const auto& ref : node.frontier_refs) {
      held[node.id].push_back({ref.frontier_id, ref.size, 0.0, node.id});
    }
  }

  // Fold branch nodes into their parents, deepest first.
  std::vector<int> order;
  for (const auto& node : graph.nodes) {
    if (node.kind == NodeKind::Branch) order.push_back(node.id);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tie(dist[b], b) < std::tie(dist[a], a);
  });
  for (int b : order) {
    const double hop = graph.edges[parent_edge[b]].length;
    auto& into = held[parent[b]];
    for (auto rec : held[b]) {
      rec.distance += hop;
      into.push_back(rec);
    }
    held[b].clear();
  }

  for (int root : tree.roots) {
    auto& list = tree.records[root];
    list = std::move(held[root]);
    std::sort(list.begin(), list.end(), [](const RootRecord& a, const RootRecord& b) {
      return std::tie(a.distance, a.frontier_id) < std::tie(b.distance, b.frontier_id);
    });
  }
  return tree;
}

std::optional<int> nearest_root(const MultiRootTree& tree, const TopoGraph& graph,
                                const Pose& robot) {
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int root : tree.roots) {
    const double d = distance(graph.nodes[root].position, robot.position());
    if (d < best_d || (d == best_d && root < *best)) {
      best_d = d;
      best = root;
    }
  }
  return best;
}

double node_score(std::span<const RootRecord> records, double d) {
  double total = 0.0;
  for (const auto& r : records) total += static_cast<double>(r.size);
  return total * std::exp(-d);
}

std::vector<PathCandidate> enumerate_stem_paths(const MultiRootTree& tree, const TopoGraph& graph,
                                                int key, double floor) {
  if (!graph.has_node(key)) {
    throw Error(ErrorCode::MissingNode, "key node " + std::to_string(key) + " not in graph");
  }
  const int n = static_cast<int>(graph.nodes.size());
  // Stem-induced adjacency, one (shortest) edge per neighbour, by node id.
  std::vector<std::vector<std::pair<int, double>>> stem_adj(n);
  for (const auto& node : graph.nodes) {
    if (node.kind != NodeKind::Stem) continue;
    for (int e : graph.adjacency[node.id]) {
      const int v = graph.edges[e].other(node.id);
      if (graph.nodes[v].kind != NodeKind::Stem) continue;
      auto& list = stem_adj[node.id];
      auto it = std::find_if(list.begin(), list.end(), [&](const auto& p) { return p.first == v; });
      if (it == list.end()) {
        list.emplace_back(v, graph.edges[e].length);
      } else {
        it->second = std::min(it->second, graph.edges[e].length);
      }
    }
    std::sort(stem_adj[node.id].begin(), stem_adj[node.id].end());
  }

  // Exhaustive enumeration is exponential on dense stem cycles; the cap keeps
  // a pathological map from stalling a planning cycle.
  constexpr std::size_t kMaxPaths = 20000;
  std::vector<PathCandidate> out;
  std::vector<char> on_path(n, 0);
  PathCandidate cur;
  on_path[key] = 1;

  std::function<void(int, double)> extend = [&](int u, double travelled) {
    if (out.size() >= kMaxPaths) return;
    bool extended = false;
    for (const auto& [v, len] : stem_adj[u]) {
      if (on_path[v]) continue;
      extended = true;
      on_path[v] = 1;
      cur.nodes.push_back(v);
      cur.travel.push_back(travelled + len);
      extend(v, travelled + len);
      cur.nodes.pop_back();
      cur.travel.pop_back();
      on_path[v] = 0;
    }
    if (!extended && !cur.nodes.empty()) {
      PathCandidate done = cur;
      done.length = done.travel.back();
      double sum = 0.0;
      for (std::size_t j = 0; j < done.nodes.size(); ++j) {
        sum += node_score(tree.records_of(done.nodes[j]), done.travel[j]);
      }
      done.score = sum / std::max(std::log(done.length + 1.0), floor);
      out.push_back(std::move(done));
    }
  };
  extend(key, 0.0);
  return out;
}

std::vector<PathCandidate> rank_paths(const MultiRootTree& tree, const TopoGraph& graph, int key,
                                      double floor) {
  auto paths = enumerate_stem_paths(tree, graph, key, floor);
  std::stable_sort(paths.begin(), paths.end(), [](const PathCandidate& a, const PathCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.nodes < b.nodes;
  });
  return paths;
}

std::optional<PathCandidate> select_goal(const MultiRootTree& tree, const TopoGraph& graph,
                                         int key, double floor) {
  auto ranked = rank_paths(tree, graph, key, floor);
  if (ranked.empty() || !(ranked.front().score > 0.0)) return std::nullopt;
  return std::move(ranked.front());
}

}  // namespace explore
