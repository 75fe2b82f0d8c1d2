#pragma once

#include <optional>
#include <span>
#include <vector>

#include "explore/grid.hpp"
#include "explore/sim.hpp"

namespace explore {

struct Frontier {
  int id = 0;
  std::vector<CellIndex> cells;  // row-major order
  Point2 centroid{};
  /// Member cell closest to the centroid; used as the navigation target
  /// because the centroid of a curved frontier can fall outside it.
  CellIndex anchor{};

  std::size_t size() const { return cells.size(); }
};

/// Raw cost components for one frontier as seen from a pose.
struct FrontierCosts {
  double distance = 0.0;  // meters, robot to centroid
  double size = 0.0;      // cells
  double steering = 0.0;  // radians in [0, pi]
};

struct LocalWindow {
  Point2 center{};
  double half_extent = 4.0;

  /// Axis-aligned square test, boundary inclusive.
  bool contains(Point2 p) const {
    return std::abs(p.x - center.x) <= half_extent && std::abs(p.y - center.y) <= half_extent;
  }
};

/// Unknown cell with at least one Free 4-neighbour.
bool is_frontier_cell(const OccupancyGrid& grid, CellIndex c);

/// Groups frontier cells into maximal 8-connected regions, drops regions
/// smaller than min_size and numbers the rest 0.. in order of their first
/// cell in row-major scan.
std::vector<Frontier> detect_frontiers(const OccupancyGrid& grid, std::size_t min_size);

FrontierCosts frontier_costs(const Frontier& f, const Pose& robot);

/// Greedy utility w_d*D - w_s*S minimised over every frontier; ties go to the
/// lowest id.
std::optional<Frontier> greedy_select(std::span<const Frontier> frontiers, const Pose& robot,
                                      double w_d, double w_s);

/// Min-max normalisation of each component across the set. A component with
/// zero spread normalises to 0 for every candidate.
std::vector<FrontierCosts> normalize_costs(std::span<const FrontierCosts> raw);

/// Index minimising |D| - |S| + |R| over normalised costs; earliest index
/// wins ties. Empty input gives nullopt.
std::optional<std::size_t> oriented_argmin(std::span<const FrontierCosts> raw);

std::vector<Frontier> frontiers_in_window(std::span<const Frontier> frontiers,
                                          const LocalWindow& window);

/// Oriented local selection over the frontiers whose centroid lies in the window.
std::optional<Frontier> oriented_select(std::span<const Frontier> frontiers, const Pose& robot,
                                        const LocalWindow& window);

}  // namespace explore
