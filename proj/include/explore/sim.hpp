#pragma once

#include <deque>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "explore/grid.hpp"

namespace explore {

/// Wraps to (-pi, pi].
double wrap_angle(double a);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Point2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct SensorConfig {
  int beam_count = 360;
  double fov = 270.0 * std::numbers::pi / 180.0;
  double max_range = 10.0;
  double yaw_offset = 0.0;

  void validate() const;
  /// Beam headings relative to the robot heading, yaw offset included.
  std::vector<double> beam_offsets() const;
};

struct HeadingSample {
  double time = 0.0;
  double theta = 0.0;
};

inline constexpr double kHeadingRetention = 5.0;

struct SimState {
  OccupancyGrid truth;
  OccupancyGrid discovered;
  Pose robot;
  double sim_time = 0.0;
  double distance_travelled = 0.0;
  std::deque<HeadingSample> heading_history;

  /// Fresh state: discovered all Unknown, one heading sample at t = 0.
  /// Throws InvalidState if the pose is not in truth free space.
  static SimState start(OccupancyGrid truth, Pose pose);
};

enum class Stage { Local, Global, Idle };
const char* to_string(Stage s);

struct CoverageRecord {
  double sim_time = 0.0;
  double discovered_free_fraction = 0.0;
  double distance_travelled = 0.0;
  Stage active_stage = Stage::Idle;
};

/// Casts every beam against the truth map: cells before the hit become
/// Free, the hit cell becomes Occupied. Returns the number of cells whose
/// discovered state changed.
std::size_t sense(SimState& state, const SensorConfig& cfg);

struct StepOutcome {
  double advanced = 0.0;
  bool empty_path = false;
  bool reached_end = false;
  /// Cells whose discovered state changed during the closing sense.
  std::size_t sensed = 0;
};

/// Moves the robot v_max*dt along the remaining waypoints, popping the ones
/// it passes, aligns heading with the local tangent and senses.
/// An empty path is a no-op that sets `empty_path`.
StepOutcome step_along(SimState& state, std::deque<Point2>& path, double v_max, double dt,
                       const SensorConfig& cfg);

/// Time passes with the robot standing still.
void advance_idle(SimState& state, double dt);

/// Rotates in place to `theta` over one step of `dt` and senses. Returns the
/// number of changed cells.
std::size_t turn_to(SimState& state, double theta, double dt, const SensorConfig& cfg);

/// Net unwrapped heading change over the trailing window, in radians.
double heading_change(const SimState& state, double window);

/// Reachable truth free space from the run start, computed once.
class CoverageTracker {
 public:
  CoverageTracker(const OccupancyGrid& truth, Point2 start);

  double coverage(const OccupancyGrid& discovered) const;
  std::size_t reachable_count() const { return reachable_count_; }
  const Raster<std::uint8_t>& reachable() const { return reachable_; }

 private:
  Raster<std::uint8_t> reachable_;
  std::size_t reachable_count_ = 0;
};

double coverage(const SimState& state, const CoverageTracker& tracker);

/// Discovered map in ASCII followed by a `pose x y theta time distance` line.
std::string serialize_snapshot(const SimState& state);

struct Snapshot {
  OccupancyGrid discovered;
  Pose robot;
  double sim_time = 0.0;
  double distance_travelled = 0.0;
};
Snapshot parse_snapshot(std::string_view text, double resolution = 1.0, Point2 origin = {});

}  // namespace explore
