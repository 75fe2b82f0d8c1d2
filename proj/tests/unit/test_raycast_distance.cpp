#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "explore/distance_field.hpp"
#include "explore/error.hpp"
#include "explore/raycast.hpp"
#include "oracles.hpp"

using namespace explore;

TEST_CASE("ray along an empty corridor stops at max range") {
  const auto g = oracle::ascii({std::string(10, '.')});
  const auto hit = raycast(g, {0.5, 0.5}, 0.0, 5.0);
  CHECK(hit.range == 5.0);
  CHECK(hit.terminal == RayTerminal::MaxRange);
}

TEST_CASE("ray reports a wall three cells ahead") {
  const auto g = oracle::ascii({"...#......"});
  const auto hit = raycast(g, {0.5, 0.5}, 0.0, 20.0);
  CHECK(hit.terminal == RayTerminal::Obstacle);
  CHECK(hit.range >= 2.0);
  CHECK(hit.range <= 3.0);
  CHECK(hit.hit_cell == CellIndex{3, 0});
}

TEST_CASE("ray leaving the grid ends at the edge") {
  const auto g = oracle::ascii({"....."});
  const auto hit = raycast(g, {0.5, 0.5}, 0.0, 20.0);
  CHECK(hit.terminal == RayTerminal::MapEdge);
  CHECK(hit.range == doctest::Approx(4.5));
}

TEST_CASE("ray origin outside the grid is out of bounds") {
  const auto g = oracle::ascii({"..."});
  CHECK_THROWS_AS(raycast(g, {-0.5, 0.5}, 0.0, 1.0), Error);
  try {
    raycast(g, {5.0, 0.5}, 0.0, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfBounds);
  }
}

TEST_CASE("ray visits cells in order with increasing entry range") {
  std::mt19937_64 rng(3);
  const auto g = oracle::random_grid(rng, 16, 16, 0.85, 0.15);
  for (int k = 0; k < 50; ++k) {
    const Point2 from{oracle::uniform(rng, 0.1, 15.9), oracle::uniform(rng, 0.1, 15.9)};
    if (g.at(*g.world_to_cell(from)) == Cell::Occupied) continue;
    std::vector<std::pair<CellIndex, double>> seen;
    raycast(g, from, oracle::uniform(rng, -3.2, 3.2), 30.0,
            [&](CellIndex c, double t) { seen.emplace_back(c, t); });
    for (std::size_t i = 1; i < seen.size(); ++i) {
      CHECK(seen[i].second >= seen[i - 1].second);
      const int dc = std::abs(seen[i].first.col - seen[i - 1].first.col);
      const int dr = std::abs(seen[i].first.row - seen[i - 1].first.row);
      CHECK(std::max(dc, dr) == 1);
    }
  }
}

TEST_CASE("ray ranges agree with fine-step marching on random grids") {
  std::mt19937_64 rng(11);
  const auto g = oracle::random_grid(rng, 16, 16, 0.8, 0.2);
  int rays = 0;
  while (rays < 20) {
    const Point2 from{oracle::uniform(rng, 0.0, 16.0), oracle::uniform(rng, 0.0, 16.0)};
    if (g.at(*g.world_to_cell(from)) == Cell::Occupied) continue;
    const double heading = oracle::uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double max_range = oracle::uniform(rng, 1.0, 25.0);
    const auto hit = raycast(g, from, heading, max_range);
    const double expected = oracle::march_ray(g, from, heading, max_range);
    CHECK(std::abs(hit.range - expected) <= std::sqrt(2.0) * g.resolution());
    ++rays;
  }
}

TEST_CASE("raycast range is monotone in max_range") {
  std::mt19937_64 rng(5);
  const auto g = oracle::random_grid(rng, 20, 20, 0.85, 0.15, 0.4);
  for (int k = 0; k < 200; ++k) {
    const Point2 from{oracle::uniform(rng, 0.0, 8.0), oracle::uniform(rng, 0.0, 8.0)};
    if (g.at(*g.world_to_cell(from)) == Cell::Occupied) continue;
    const double heading = oracle::uniform(rng, -4.0, 4.0);
    double last = 0.0;
    for (double r = 0.2; r < 12.0; r += 0.37) {
      const double range = raycast(g, from, heading, r).range;
      CHECK(range >= last);
      last = range;
    }
  }
}

TEST_CASE("distance to a single obstacle follows the Euclidean distance") {
  OccupancyGrid g(21, 21, 0.5, {}, Cell::Free);
  g.set(CellIndex{10, 10}, Cell::Occupied);
  const auto f = distance_transform(g);
  CHECK(f.at({10, 10}) == 0.0);
  for (int r = 0; r < 21; ++r) {
    for (int c = 0; c < 21; ++c) {
      if (c == 10 && r == 10) continue;
      const double exact = std::hypot(c - 10, r - 10) * 0.5;
      CHECK(std::abs(f.at({c, r}) - exact) <= 0.08 * exact);
    }
  }
}

TEST_CASE("all-obstacle grid has a zero field") {
  const auto f = distance_transform(OccupancyGrid(4, 3, 1.0, {}, Cell::Occupied));
  for (double v : f.meters.data()) CHECK(v == 0.0);
}

TEST_CASE("grid without obstacles has no defined field") {
  try {
    distance_transform(OccupancyGrid(4, 3, 1.0, {}, Cell::Free));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedField);
  }
}

TEST_CASE("distance field agrees with brute force on random grids") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 5; ++k) {
    const auto g = oracle::random_grid(rng, 24, 24, 0.93, 0.05, 0.4);
    const auto f = distance_transform(g);
    const auto exact = oracle::brute_distance(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(f.meters[i] - exact[i]) <= 0.08 * exact[i] + 1e-12);
    }
  }
}

TEST_CASE("distance field is zero on obstacles, non-negative and 1-Lipschitz") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    const auto g = oracle::random_grid(rng, 30, 17, 0.9, 0.07, 0.3);
    const auto f = distance_transform(g);
    for (int r = 0; r < g.height(); ++r) {
      for (int c = 0; c < g.width(); ++c) {
        const CellIndex a{c, r};
        CHECK(f.at(a) >= 0.0);
        if (g.at(a) != Cell::Free) CHECK(f.at(a) == 0.0);
        for (int n = 0; n < 8; ++n) {
          const CellIndex b{c + kRingDc[n], r + kRingDr[n]};
          if (!g.contains(b)) continue;
          CHECK(std::abs(f.at(a) - f.at(b)) <= std::sqrt(2.0) * g.resolution() + 1e-9);
        }
      }
    }
  }
}
