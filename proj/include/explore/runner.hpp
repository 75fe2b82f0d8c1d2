#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "explore/config.hpp"
#include "explore/grid.hpp"
#include "explore/policy.hpp"
#include "explore/sim.hpp"

namespace explore {

enum class RunStatus { Done, TimeLimit, Failed };
const char* to_string(RunStatus s);

/// One planning cycle as seen by the runner.
struct TraceRow {
  double time = 0.0;
  Pose robot;
  CycleAction action = CycleAction::Keep;
  bool filter_fired = false;
  std::optional<ExplorationGoal> goal;
  double coverage = 0.0;
  std::size_t frontiers = 0;
};
const char* to_string(CycleAction a);

struct RunResult {
  std::string policy;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::TimeLimit;
  Pose start;
  std::vector<CoverageRecord> records;
  std::vector<TraceRow> trace;
  std::optional<double> t60;
  std::optional<double> t80;
  std::optional<double> t90;
  double final_coverage = 0.0;
  double distance = 0.0;
  double sim_time = 0.0;
  /// Heading reversals above the threshold taken outside junction zones.
  int reversals = 0;
  double wall_seconds = 0.0;
};

inline constexpr double kReversalThresholdDeg = 150.0;
inline constexpr int kJunctionZoneRadius = 2;

/// Cells within Chebyshev distance `radius` of a junction (skeleton degree
/// >= 3) of the ground-truth skeleton.
Raster<std::uint8_t> junction_zone(const OccupancyGrid& truth, int radius = kJunctionZoneRadius);

/// Base pose snapped to its cell center, then offset by up to a quarter cell
/// in x and y with a uniformly drawn heading, all from `seed`.
Pose jittered_start(const OccupancyGrid& truth, Pose base, std::uint64_t seed);

/// First planned point replaced by the robot position when the straight
/// segment to the next point stays on Free cells, otherwise the robot position
/// is prepended.
std::deque<Point2> prepare_path(const OccupancyGrid& discovered, Point2 robot,
                                const std::vector<Point2>& planned);

struct RunOptions {
  /// Sim times at which `on_snapshot` fires (once each, at the first step
  /// boundary at or after the time).
  std::vector<double> snapshot_times;
  std::function<void(const SimState&, const Policy&, double requested)> on_snapshot;
};

/// Runs one exploration from `start` (used as is) until the policy finishes,
/// max_sim_time elapses or the wall-clock budget is exhausted.
RunResult run_exploration(const OccupancyGrid& truth, Pose start, const std::string& policy,
                          std::uint64_t seed, const ExplorationConfig& cfg,
                          const RunOptions& options = {});

/// `sim_time,coverage,distance,stage` with fixed precision.
std::string records_csv(const RunResult& run);
/// `time,robot_x,robot_y,action,filter_fired,goal_source,goal_x,goal_y,coverage,frontiers`.
std::string trace_csv(const RunResult& run);

struct SummaryRow {
  std::string policy;
  std::size_t runs = 0;
  std::size_t failed = 0;
  double mean_t60 = 0.0;
  double mean_t80 = 0.0;
  double mean_t90 = 0.0;
  double mean_distance = 0.0;
  double mean_final_coverage = 0.0;
  double mean_reversals = 0.0;
};

/// Means over runs that did not fail; a milestone never reached counts as
/// `censor_time`.
SummaryRow summarize(const std::string& policy, const std::vector<RunResult>& runs,
                     double censor_time);
std::string summary_csv(const std::vector<SummaryRow>& rows);

/// Gray levels used by render_snapshot.
namespace gray {
inline constexpr std::uint8_t kOccupied = 0;
inline constexpr std::uint8_t kRobot = 20;
inline constexpr std::uint8_t kStem = 45;
inline constexpr std::uint8_t kBranch = 70;
inline constexpr std::uint8_t kFrontier = 100;
inline constexpr std::uint8_t kUnknown = 128;
inline constexpr std::uint8_t kGoal = 160;
inline constexpr std::uint8_t kSkeleton = 200;
inline constexpr std::uint8_t kFree = 255;
}  // namespace gray

/// Discovered map with skeleton, stem and branch nodes, frontiers, the goal
/// and the robot painted in that order. Row 0 is the first image row.
Raster<std::uint8_t> render_snapshot(const SimState& sim, const std::optional<ExplorationGoal>& goal,
                                     Point2 run_start, const ExplorationConfig& cfg);

}  // namespace explore
