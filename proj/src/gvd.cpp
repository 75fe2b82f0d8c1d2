#include "explore/gvd.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "explore/error.hpp"

namespace explore {

std::size_t GvdMatrix::count() const {
  const auto d = flags.data();
  return static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](auto v) { return v != 0; }));
}

namespace {

std::uint8_t flag_at(const Raster<std::uint8_t>& mask, int col, int row) {
  const CellIndex c{col, row};
  return mask.contains(c) ? (mask[c] != 0) : 0;
}

void ring_values(const Raster<std::uint8_t>& mask, CellIndex c, std::uint8_t (&p)[8]) {
  for (int k = 0; k < 8; ++k) p[k] = flag_at(mask, c.col + kRingDc[k], c.row + kRingDr[k]);
}

int find(int (&parent)[8], int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

int skeleton_degree(const Raster<std::uint8_t>& mask, CellIndex c) {
  std::uint8_t p[8];
  ring_values(mask, c, p);
  int n = 0;
  for (auto v : p) n += v;
  return n;
}

bool is_simple_point(const Raster<std::uint8_t>& mask, CellIndex c) {
  std::uint8_t p[8];
  ring_values(mask, c, p);

  // Foreground: 8-adjacency inside the ring links consecutive cells and
  // orthogonal cells two apart (N-E, E-S, S-W, W-N).
  int fg[8];
  for (int i = 0; i < 8; ++i) fg[i] = i;
  for (int i = 0; i < 8; ++i) {
    const int j = (i + 1) % 8;
    if (p[i] && p[j]) fg[find(fg, i)] = find(fg, j);
    if (i % 2 == 0) {
      const int o = (i + 2) % 8;
      if (p[i] && p[o]) fg[find(fg, i)] = find(fg, o);
    }
  }
  int fg_components = 0;
  for (int i = 0; i < 8; ++i) {
    if (p[i] && find(fg, i) == i) ++fg_components;
  }
  if (fg_components != 1) return false;

  // Background: 4-adjacency inside the ring links consecutive cells only;
  // count components that touch an orthogonal neighbour of c.
  int bg[8];
  for (int i = 0; i < 8; ++i) bg[i] = i;
  for (int i = 0; i < 8; ++i) {
    const int j = (i + 1) % 8;
    if (!p[i] && !p[j]) bg[find(bg, i)] = find(bg, j);
  }
  bool touching[8] = {};
  for (int i = 0; i < 8; i += 2) {
    if (!p[i]) touching[find(bg, i)] = true;
  }
  int bg_components = 0;
  for (bool t : touching) bg_components += t;
  return bg_components == 1;
}

Raster<std::uint8_t> zhang_suen_thin(Raster<std::uint8_t> mask) {
  std::vector<std::size_t> marked;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      marked.clear();
      for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) continue;
        std::uint8_t p[8];
        ring_values(mask, mask.cell_of(i), p);
        int b = 0;
        int a = 0;
        for (int k = 0; k < 8; ++k) {
          b += p[k];
          a += (!p[k] && p[(k + 1) % 8]);
        }
        if (b < 2 || b > 6 || a != 1) continue;
        // p[0]=N p[2]=E p[4]=S p[6]=W
        if (pass == 0 && ((p[0] && p[2] && p[4]) || (p[2] && p[4] && p[6]))) continue;
        if (pass == 1 && ((p[0] && p[2] && p[6]) || (p[0] && p[4] && p[6]))) continue;
        marked.push_back(i);
      }
      for (auto i : marked) mask[i] = 0;
      changed = changed || !marked.empty();
    }
  }
  return mask;
}

GvdMatrix extract_gvd(const OccupancyGrid& discovered) {
  const int w = discovered.width();
  const int h = discovered.height();
  Raster<std::uint8_t> mask(w, h, 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const CellIndex cell{c, r};
      if (discovered.at(cell) != Cell::Free) continue;
      bool clear = true;
      for (int k = 0; k < 8 && clear; ++k) {
        clear = discovered.at_or({c + kRingDc[k], r + kRingDr[k]}, Cell::Occupied) == Cell::Free;
      }
      mask[cell] = clear;
    }
  }

  mask = zhang_suen_thin(std::move(mask));

  // Zhang-Suen leaves staircases and the odd 2x2 block; strip every simple
  // point that is not an endpoint until the skeleton is minimal.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i]) continue;
      const auto c = mask.cell_of(i);
      if (skeleton_degree(mask, c) >= 2 && is_simple_point(mask, c)) {
        mask[i] = 0;
        changed = true;
      }
    }
  }
  return GvdMatrix{std::move(mask)};
}

double polyline_length(std::span<const CellIndex> polyline, double resolution) {
  double steps = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) {
    const bool diagonal = polyline[i].col != polyline[i - 1].col &&
                          polyline[i].row != polyline[i - 1].row;
    steps += diagonal ? std::sqrt(2.0) : 1.0;
  }
  return steps * resolution;
}

int TopoGraph::add_node(TopoNode node) {
  node.id = static_cast<int>(nodes.size());
  nodes.push_back(std::move(node));
  adjacency.emplace_back();
  return nodes.back().id;
}

int TopoGraph::add_edge(int u, int v, std::vector<CellIndex> polyline) {
  const double length = polyline_length(polyline, resolution);
  TopoEdge e{static_cast<int>(edges.size()), u, v, std::move(polyline), length};
  edges.push_back(std::move(e));
  adjacency[u].push_back(edges.back().id);
  adjacency[v].push_back(edges.back().id);
  return edges.back().id;
}

int TopoGraph::add_edge_with_length(int u, int v, double length) {
  if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loops are not allowed");
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "edge length must be > 0");
  edges.push_back(TopoEdge{static_cast<int>(edges.size()), u, v, {}, length});
  adjacency[u].push_back(edges.back().id);
  adjacency[v].push_back(edges.back().id);
  return edges.back().id;
}

int TopoGraph::edge_between(int u, int v) const {
  int best = -1;
  for (int e : adjacency[u]) {
    if (edges[e].other(u) != v) continue;
    if (best < 0 || edges[e].length < edges[best].length) best = e;
  }
  return best;
}

namespace {

// 4-neighbours first so the walk prefers orthogonal continuation.
constexpr int kWalkOrder[8] = {0, 2, 4, 6, 1, 3, 5, 7};

std::optional<CellIndex> attach_cell(const Frontier& f, const GvdMatrix& m,
                                     const OccupancyGrid& grid) {
  Raster<std::uint8_t> seen(grid.width(), grid.height(), 0);
  std::vector<CellIndex> queue(f.cells.begin(), f.cells.end());
  for (const auto& c : queue) seen[c] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto c = queue[head];
    for (int k = 0; k < 4; ++k) {
      const CellIndex n{c.col + k4Dc[k], c.row + k4Dr[k]};
      if (!grid.contains(n) || seen[n] || grid.at(n) != Cell::Free) continue;
      if (m.at(n)) return n;
      seen[n] = 1;
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

}  // namespace

TopoGraph build_graph(const GvdMatrix& m, std::span<const Frontier> frontiers,
                      const OccupancyGrid& discovered) {
  if (m.width() != discovered.width() || m.height() != discovered.height()) {
    throw Error(ErrorCode::ShapeMismatch, "GVD matrix and grid differ in shape");
  }
  const int w = m.width();
  const int h = m.height();
  TopoGraph g;
  g.resolution = discovered.resolution();
  Raster<int> owner(w, h, -1);

  auto make_node = [&](std::vector<CellIndex> cells, bool junction) {
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& c : cells) {
      sx += c.col;
      sy += c.row;
    }
    const double cx = sx / cells.size();
    const double cy = sy / cells.size();
    CellIndex rep = cells.front();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cells) {
      const double d = std::hypot(c.col - cx, c.row - cy);
      if (d < best) {
        best = d;
        rep = c;
      }
    }
    TopoNode n;
    n.cell = rep;
    n.position = discovered.cell_center(rep);
    n.cells = std::move(cells);
    n.is_junction = junction;
    const int id = g.add_node(std::move(n));
    for (const auto& c : g.nodes[id].cells) owner[c] = id;
    return id;
  };

  Raster<int> degree(w, h, 0);
  for (std::size_t i = 0; i < m.flags.size(); ++i) {
    if (m.flags[i]) degree[i] = skeleton_degree(m.flags, m.flags.cell_of(i));
  }

  // Junction clusters.
  Raster<std::uint8_t> seen(w, h, 0);
  for (std::size_t i = 0; i < m.flags.size(); ++i) {
    if (!m.flags[i] || degree[i] < 3 || seen[i]) continue;
    std::vector<CellIndex> cluster{m.flags.cell_of(i)};
    seen[i] = 1;
    for (std::size_t head = 0; head < cluster.size(); ++head) {
      const auto c = cluster[head];
      for (int k = 0; k < 8; ++k) {
        const CellIndex n{c.col + kRingDc[k], c.row + kRingDr[k]};
        if (m.at(n) && degree[n] >= 3 && !seen[n]) {
          seen[n] = 1;
          cluster.push_back(n);
        }
      }
    }
    std::sort(cluster.begin(), cluster.end());
    make_node(std::move(cluster), true);
  }

  // Endpoints and isolated cells.
  for (std::size_t i = 0; i < m.flags.size(); ++i) {
    if (m.flags[i] && degree[i] <= 1) make_node({m.flags.cell_of(i)}, false);
  }

  // Frontier attribution: the skeleton cell nearest through free space.
  for (const auto& f : frontiers) {
    const auto cell = attach_cell(f, m, discovered);
    if (!cell) continue;
    int id = owner[*cell];
    if (id < 0) id = make_node({*cell}, false);
    g.nodes[id].frontier_refs.push_back({f.id, f.size()});
    g.nodes[id].is_leaf = true;
  }

  // Edge tracing.
  Raster<std::uint8_t> used(w, h, 0);
  std::set<std::pair<int, int>> direct;
  for (int a = 0; a < static_cast<int>(g.nodes.size()); ++a) {
    const auto start_cells = g.nodes[a].cells;
    for (const auto& s : start_cells) {
      for (int k : kWalkOrder) {
        const CellIndex n{s.col + kRingDc[k], s.row + kRingDr[k]};
        if (!m.at(n) || owner[n] == a) continue;
        if (owner[n] >= 0) {
          const auto key = std::minmax(a, owner[n]);
          if (direct.insert(key).second) g.add_edge(a, owner[n], {s, n});
          continue;
        }
        if (used[n]) continue;

        std::vector<CellIndex> poly{s, n};
        used[n] = 1;
        CellIndex prev = s;
        CellIndex cur = n;
        int end_node = -1;
        while (true) {
          std::optional<CellIndex> next;
          for (int kk : kWalkOrder) {
            const CellIndex q{cur.col + kRingDc[kk], cur.row + kRingDr[kk]};
            if (!m.at(q) || q == prev) continue;
            const int o = owner[q];
            if (o >= 0 && (o != a || poly.size() > 3)) {
              end_node = o;
              next = q;
              break;
            }
          }
          if (end_node >= 0) {
            poly.push_back(*next);
            break;
          }
          for (int kk : kWalkOrder) {
            const CellIndex q{cur.col + kRingDc[kk], cur.row + kRingDr[kk]};
            if (m.at(q) && owner[q] < 0 && !used[q]) {
              next = q;
              break;
            }
          }
          if (!next) break;
          poly.push_back(*next);
          used[*next] = 1;
          prev = cur;
          cur = *next;
        }
        if (end_node < 0) continue;
        if (end_node != a) {
          g.add_edge(a, end_node, std::move(poly));
          continue;
        }
        // A loop back to the start node: split it at its middle cell so the
        // cycle survives without a self-loop.
        const std::size_t mid = poly.size() / 2;
        used[poly[mid]] = 0;
        const int mid_node = make_node({poly[mid]}, false);
        g.add_edge(a, mid_node, std::vector<CellIndex>(poly.begin(), poly.begin() + mid + 1));
        g.add_edge(mid_node, a, std::vector<CellIndex>(poly.begin() + mid, poly.end()));
      }
    }
  }
  return g;
}

std::string dump_graph(const TopoGraph& graph) {
  std::ostringstream out;
  char buf[128];
  out << "nodes " << graph.nodes.size() << '\n';
  for (const auto& n : graph.nodes) {
    std::snprintf(buf, sizeof buf, "%d %.3f %.3f %s %d ", n.id, n.position.x, n.position.y,
                  n.kind == NodeKind::Stem ? "stem" : "branch", n.is_leaf ? 1 : 0);
    out << buf;
    if (n.frontier_refs.empty()) out << '-';
    for (std::size_t i = 0; i < n.frontier_refs.size(); ++i) {
      out << (i ? "," : "") << n.frontier_refs[i].size;
    }
    out << '\n';
  }
  out << "edges " << graph.edges.size() << '\n';
  for (const auto& e : graph.edges) {
    std::snprintf(buf, sizeof buf, "%d %d %.3f\n", e.u, e.v, e.length);
    out << buf;
  }
  return out.str();
}

}  // namespace explore
