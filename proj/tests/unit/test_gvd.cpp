#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "explore/bench.hpp"
#include "explore/error.hpp"
#include "explore/frontier.hpp"
#include "explore/gvd.hpp"
#include "explore/sim.hpp"
#include "oracles.hpp"

using namespace explore;

namespace {

OccupancyGrid corridor(int length, int width, char ends) {
  std::vector<std::string> rows;
  rows.push_back(std::string(length, '#'));
  for (int r = 0; r < width; ++r) rows.push_back(ends + std::string(length - 2, '.') + ends);
  rows.push_back(std::string(length, '#'));
  return oracle::ascii(rows);
}

/// Cross-shaped corridors of the given width; `arms` picks N, E, S, W.
OccupancyGrid crossing(int size, int width, const std::string& arms) {
  OccupancyGrid g(size, size, 1.0, {}, Cell::Occupied);
  const int lo = (size - width) / 2, hi = lo + width;
  const int mid = size / 2;
  for (int r = 1; r < size - 1; ++r) {
    for (int c = 1; c < size - 1; ++c) {
      const bool band_h = r >= lo && r < hi;
      const bool band_v = c >= lo && c < hi;
      bool free = band_h && band_v;
      if (band_h && c >= mid && arms.find('E') != std::string::npos) free = true;
      if (band_h && c < mid && arms.find('W') != std::string::npos) free = true;
      if (band_v && r >= mid && arms.find('N') != std::string::npos) free = true;
      if (band_v && r < mid && arms.find('S') != std::string::npos) free = true;
      if (free) g.set(CellIndex{c, r}, Cell::Free);
    }
  }
  return g;
}

std::vector<std::vector<CellIndex>> junction_clusters(const GvdMatrix& m) {
  std::set<CellIndex> pending;
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c)
      if (m.at({c, r}) && skeleton_degree(m.flags, {c, r}) >= 3) pending.insert({c, r});
  std::vector<std::vector<CellIndex>> out;
  while (!pending.empty()) {
    std::vector<CellIndex> cluster{*pending.begin()};
    pending.erase(pending.begin());
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      for (int k = 0; k < 8; ++k) {
        const CellIndex n{cluster[i].col + kRingDc[k], cluster[i].row + kRingDr[k]};
        if (pending.erase(n)) cluster.push_back(n);
      }
    }
    out.push_back(cluster);
  }
  return out;
}

/// Discovered maps from a few sensing poses on the bundled fixtures.
std::vector<std::pair<OccupancyGrid, std::vector<Frontier>>> partial_maps() {
  std::vector<std::pair<OccupancyGrid, std::vector<Frontier>>> out;
  SensorConfig cfg;
  cfg.max_range = 6.0;
  for (const char* name : {"maze64", "corridor_office", "open_rooms"}) {
    const auto map = load_bench_map(*resolve_map(name, bundled_maps_dir()));
    for (const auto& start : map.starts) {
      auto s = SimState::start(map.grid, start);
      sense(s, cfg);
      out.emplace_back(s.discovered, detect_frontiers(s.discovered, 1));
    }
    out.emplace_back(map.grid, std::vector<Frontier>{});
  }
  return out;
}

}  // namespace

TEST_CASE("skeleton of a straight 5-wide corridor is its centre row") {
  const auto g = corridor(21, 5, '#');
  const auto m = extract_gvd(g);
  REQUIRE(m.count() > 0);
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c)
      if (m.at({c, r})) CHECK(std::abs(r - 3) <= 1);
  for (int c = 5; c <= 15; ++c) CHECK(m.at({c, 3}));
}

TEST_CASE("plus junction has exactly one branching cluster") {
  const auto m = extract_gvd(crossing(31, 5, "NESW"));
  CHECK(junction_clusters(m).size() == 1);
}

TEST_CASE("T junction graph: one junction, three ends, three edges") {
  const auto g = crossing(31, 5, "EWS");
  const auto m = extract_gvd(g);
  const auto graph = build_graph(m, {}, g);
  int junctions = 0, ends = 0;
  for (const auto& n : graph.nodes) (n.is_junction ? junctions : ends) += 1;
  CHECK(junctions == 1);
  CHECK(ends == 3);
  CHECK(graph.edges.size() == 3);
  for (const auto& e : graph.edges) {
    CHECK(e.length > 0.0);
    CHECK(e.u != e.v);
  }
}

TEST_CASE("corridor with open ends gives two leaves joined by one edge") {
  const auto g = corridor(20, 5, '?');
  const auto fs = detect_frontiers(g, 1);
  REQUIRE(fs.size() == 2);
  const auto graph = build_graph(extract_gvd(g), fs, g);
  REQUIRE(graph.nodes.size() == 2);
  REQUIRE(graph.edges.size() == 1);
  CHECK(graph.nodes[0].is_leaf);
  CHECK(graph.nodes[1].is_leaf);
  const double span = distance(graph.nodes[0].position, graph.nodes[1].position);
  CHECK(std::abs(graph.edges[0].length - span) <= 2 * g.resolution());
  // Free run between the two frontier columns.
  const double corridor_length = distance(fs[0].centroid, fs[1].centroid) - 1.0;
  CHECK(graph.edges[0].length <= corridor_length);
  CHECK(graph.edges[0].length >= corridor_length - 6 * g.resolution());
}

TEST_CASE("edge along a straight skeleton of k cells is (k-1) cells long") {
  for (double res : {1.0, 0.4}) {
    const auto g = oracle::ascii(
        {"###########", "#.........#", "#.........#", "#.........#", "###########"}, res);
    const auto m = extract_gvd(g);
    const auto graph = build_graph(m, {}, g);
    REQUIRE(graph.edges.size() == 1);
    const auto k = static_cast<double>(m.count());
    CHECK(graph.edges[0].length == doctest::Approx((k - 1) * res));
  }
  const std::vector<CellIndex> diag{{0, 0}, {1, 1}, {2, 1}};
  CHECK(polyline_length(diag, 0.5) == doctest::Approx((std::sqrt(2.0) + 1) * 0.5));
}

TEST_CASE("open room skeleton follows the distance ridge") {
  OccupancyGrid g(21, 21, 1.0, {}, Cell::Free);
  for (int i = 0; i < 21; ++i) {
    g.set(CellIndex{i, 0}, Cell::Occupied);
    g.set(CellIndex{i, 20}, Cell::Occupied);
    g.set(CellIndex{0, i}, Cell::Occupied);
    g.set(CellIndex{20, i}, Cell::Occupied);
  }
  const auto m = extract_gvd(g);
  const auto dist = oracle::brute_distance(g);
  REQUIRE(m.count() > 0);
  for (int r = 0; r < 21; ++r) {
    for (int c = 0; c < 21; ++c) {
      if (!m.at({c, r})) continue;
      double best = 0.0;
      for (int k = 0; k < 8; ++k) {
        const CellIndex n{c + kRingDc[k], r + kRingDr[k]};
        if (g.contains(n)) best = std::max(best, dist[g.index(n)]);
      }
      CHECK(dist[g.index({c, r})] >= best - 1.0);
    }
  }
  CHECK(m.at({10, 10}));
}

TEST_CASE("skeleton invariants on partially explored fixtures") {
  for (const auto& [g, fs] : partial_maps()) {
    const auto m = extract_gvd(g);
    for (int r = 0; r < g.height(); ++r) {
      for (int c = 0; c < g.width(); ++c) {
        if (!m.at({c, r})) continue;
        CHECK(g.at(CellIndex{c, r}) == Cell::Free);
        // Never adjacent to an obstacle.
        for (int k = 0; k < 8; ++k) {
          CHECK(g.at_or({c + kRingDc[k], r + kRingDr[k]}, Cell::Occupied) == Cell::Free);
        }
        // One cell thick.
        CHECK_FALSE((m.at({c + 1, r}) && m.at({c, r + 1}) && m.at({c + 1, r + 1})));
      }
    }
  }
}

TEST_CASE("graph connectivity mirrors skeleton connectivity") {
  for (const auto& [g, fs] : partial_maps()) {
    const auto m = extract_gvd(g);
    const auto graph = build_graph(m, fs, g);
    // Skeleton components by 8-connected flood fill.
    Raster<int> comp(g.width(), g.height(), -1);
    int next = 0;
    for (int r = 0; r < g.height(); ++r) {
      for (int c = 0; c < g.width(); ++c) {
        if (!m.at({c, r}) || comp[CellIndex{c, r}] >= 0) continue;
        std::vector<CellIndex> stack{{c, r}};
        comp[stack[0]] = next;
        while (!stack.empty()) {
          const auto u = stack.back();
          stack.pop_back();
          for (int k = 0; k < 8; ++k) {
            const CellIndex v{u.col + kRingDc[k], u.row + kRingDr[k]};
            if (m.at(v) && comp[v] < 0) {
              comp[v] = next;
              stack.push_back(v);
            }
          }
        }
        ++next;
      }
    }
    // Graph components by union-find over edges.
    oracle::UnionFind uf(static_cast<int>(graph.nodes.size()));
    for (const auto& e : graph.edges) uf.unite(e.u, e.v);
    for (const auto& a : graph.nodes) {
      for (const auto& b : graph.nodes) {
        CHECK((uf.find(a.id) == uf.find(b.id)) == (comp[a.cell] == comp[b.cell]));
      }
    }
    for (const auto& e : graph.edges) CHECK(e.u != e.v);
  }
}

TEST_CASE("frontiers near the skeleton are attributed to exactly one leaf") {
  for (const auto& [g, fs] : partial_maps()) {
    const auto m = extract_gvd(g);
    const auto graph = build_graph(m, fs, g);
    std::map<int, int> owners;
    for (const auto& n : graph.nodes) {
      if (n.is_leaf) CHECK_FALSE(n.frontier_refs.empty());
      for (const auto& ref : n.frontier_refs) {
        ++owners[ref.frontier_id];
        CHECK(n.is_leaf);
      }
    }
    for (const auto& f : fs) {
      bool near = false;
      for (const auto& c : f.cells)
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) near = near || m.at({c.col + dc, c.row + dr});
      CHECK(owners[f.id] <= 1);
      if (near) CHECK(owners[f.id] == 1);
    }
  }
}

TEST_CASE("empty free space yields an empty skeleton") {
  const auto m = extract_gvd(OccupancyGrid(6, 6, 1.0, {}, Cell::Unknown));
  CHECK(m.count() == 0);
  CHECK(build_graph(m, {}, OccupancyGrid(6, 6, 1.0, {}, Cell::Unknown)).nodes.empty());
}

TEST_CASE("mismatched matrix and grid shapes are rejected") {
  const auto g = corridor(12, 5, '#');
  const auto m = extract_gvd(g);
  try {
    build_graph(m, {}, OccupancyGrid(5, 5, 1.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("graph dump lists nodes then edges") {
  TopoGraph g;
  TopoNode a;
  a.position = {1.0, 2.0};
  a.kind = NodeKind::Stem;
  TopoNode b;
  b.position = {3.5, 2.0};
  b.is_leaf = true;
  b.frontier_refs = {{0, 7}, {3, 2}};
  g.add_node(a);
  g.add_node(b);
  g.add_edge_with_length(0, 1, 2.5);
  CHECK(dump_graph(g) ==
        "nodes 2\n0 1.000 2.000 stem 0 -\n1 3.500 2.000 branch 1 7,2\nedges 1\n0 1 2.500\n");
  CHECK(g.edge_between(1, 0) == 0);
  CHECK(g.edge_between(0, 0) == -1);
  CHECK_THROWS_AS(g.add_edge_with_length(1, 1, 1.0), Error);
}

TEST_CASE("simple point test keeps topology") {
  Raster<std::uint8_t> line(5, 3, 0);
  for (int c = 0; c < 5; ++c) line[CellIndex{c, 1}] = 1;
  CHECK_FALSE(is_simple_point(line, {2, 1}));  // would split the line
  CHECK(is_simple_point(line, {4, 1}));         // endpoint
  CHECK(skeleton_degree(line, {2, 1}) == 2);
  Raster<std::uint8_t> block(4, 4, 1);
  const auto thin = zhang_suen_thin(block);
  std::size_t left = 0;
  for (auto v : thin.data()) left += v;
  CHECK(left >= 1);
  CHECK(left < 16);
}

TEST_CASE("equidistance oracle accepts the corridor axis and rejects off-axis rows") {
  // 9-cell wide corridor between two walls.
  std::vector<std::string> rows{std::string(30, '#')};
  for (int r = 0; r < 9; ++r) rows.push_back(std::string(30, '.'));
  rows.push_back(std::string(30, '#'));
  const auto g = oracle::ascii(rows, 0.5);
  auto line_at = [&](int row) {
    GvdMatrix m{Raster<std::uint8_t>(g.width(), g.height(), 0)};
    for (int c = 0; c < g.width(); ++c) m.flags[CellIndex{c, row}] = 1;
    return m;
  };
  CHECK(oracle::equidistant_share(g, line_at(5), 0.75) == 1.0);
  CHECK(oracle::equidistant_share(g, line_at(4), 0.75) == 0.0);  // gap of two cells
  CHECK(oracle::equidistant_share(g, line_at(4), 1.0) == 1.0);
  CHECK(oracle::equidistant_share(g, line_at(2), 0.75) == 0.0);
  // The two jambs of a doorway are separate obstacles even though both lie ahead.
  const auto door = oracle::ascii({"###...###", ".........", ".........", "........."}, 1.0);
  GvdMatrix m{Raster<std::uint8_t>(door.width(), door.height(), 0)};
  m.flags[CellIndex{4, 3}] = 1;
  CHECK(oracle::equidistant_share(door, m, 1.5) == 1.0);
}
