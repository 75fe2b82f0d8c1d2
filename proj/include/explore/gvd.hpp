#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "explore/frontier.hpp"
#include "explore/grid.hpp"

namespace explore {

/// Raster skeleton of free space: flags[c] != 0 when c lies on the GVD.
struct GvdMatrix {
  Raster<std::uint8_t> flags;

  bool at(CellIndex c) const { return flags.contains(c) && flags[c] != 0; }
  std::size_t count() const;
  int width() const { return flags.width(); }
  int height() const { return flags.height(); }
};

/// Skeleton of the discovered free space. Occupied and Unknown cells and the
/// map border are obstacles; free cells touching an obstacle in their
/// 8-neighbourhood are excluded before Zhang-Suen thinning, and the result is
/// reduced to a minimal 8-connected skeleton. A map with no free cell yields
/// an all-clear matrix.
GvdMatrix extract_gvd(const OccupancyGrid& discovered);

/// Two-subiteration Zhang-Suen thinning of a binary mask (outside = 0).
Raster<std::uint8_t> zhang_suen_thin(Raster<std::uint8_t> mask);

/// True when removing c keeps the 8-connected foreground and 4-connected
/// background topology of its 3x3 neighbourhood.
bool is_simple_point(const Raster<std::uint8_t>& mask, CellIndex c);

/// Number of flagged 8-neighbours.
int skeleton_degree(const Raster<std::uint8_t>& mask, CellIndex c);

enum class NodeKind { Stem, Branch };

struct FrontierRef {
  int frontier_id = 0;
  std::size_t size = 0;
};

struct TopoNode {
  int id = 0;
  Point2 position{};
  CellIndex cell{};
  /// Skeleton cells owned by this node (one cell, or a merged junction cluster).
  std::vector<CellIndex> cells;
  NodeKind kind = NodeKind::Branch;
  bool is_junction = false;
  bool is_leaf = false;
  std::vector<FrontierRef> frontier_refs;
};

struct TopoEdge {
  int id = 0;
  int u = 0;
  int v = 0;
  /// Skeleton cells from a cell of node u to a cell of node v inclusive.
  std::vector<CellIndex> polyline;
  double length = 0.0;

  int other(int node) const { return node == u ? v : u; }
};

struct TopoGraph {
  std::vector<TopoNode> nodes;
  std::vector<TopoEdge> edges;
  /// node id -> incident edge ids in insertion order
  std::vector<std::vector<int>> adjacency;
  double resolution = 1.0;

  int add_node(TopoNode node);
  int add_edge(int u, int v, std::vector<CellIndex> polyline);
  /// Edge with an explicit metric length and no polyline.
  int add_edge_with_length(int u, int v, double length);
  bool has_node(int id) const { return id >= 0 && id < static_cast<int>(nodes.size()); }
  /// Shortest edge between u and v, or -1.
  int edge_between(int u, int v) const;
};

/// Polyline length in meters: orthogonal steps count one cell, diagonal sqrt(2).
double polyline_length(std::span<const CellIndex> polyline, double resolution);

/// Nodes are junction clusters (degree >= 3, merged when adjacent), endpoints
/// (degree <= 1) and, for each frontier, the skeleton cell first reached by a
/// breadth-first search through free space from the frontier cells. Edges are
/// traced along the skeleton between nodes.
/// Throws ShapeMismatch if the matrix and grid differ in size.
TopoGraph build_graph(const GvdMatrix& m, std::span<const Frontier> frontiers,
                      const OccupancyGrid& discovered);

/// Plain-text dump: a `nodes N` block of `id x y kind leaf sizes` lines
/// followed by an `edges M` block of `u v length` lines.
std::string dump_graph(const TopoGraph& graph);

}  // namespace explore
