#include "explore/sim.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "explore/error.hpp"
#include "explore/map_io.hpp"
#include "explore/raycast.hpp"

namespace explore {

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::Local: return "local";
    case Stage::Global: return "global";
    case Stage::Idle: return "idle";
  }
  return "idle";
}

void SensorConfig::validate() const {
  if (beam_count <= 0) throw Error(ErrorCode::InvalidArgument, "beam_count must be > 0");
  if (fov < 0.0 || fov > 2.0 * std::numbers::pi + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "fov must lie in [0, 2pi]");
  }
  if (!(max_range > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_range must be > 0");
}

std::vector<double> SensorConfig::beam_offsets() const {
  std::vector<double> out;
  out.reserve(beam_count);
  if (beam_count == 1) {
    out.push_back(yaw_offset);
    return out;
  }
  // A full circle would put the first and last beam on the same heading.
  const bool full = fov >= 2.0 * std::numbers::pi - 1e-9;
  const double step = full ? fov / beam_count : fov / (beam_count - 1);
  for (int i = 0; i < beam_count; ++i) out.push_back(yaw_offset - fov / 2.0 + i * step);
  return out;
}

SimState SimState::start(OccupancyGrid truth, Pose pose) {
  const auto cell = truth.world_to_cell(pose.position());
  if (!cell || truth.at(*cell) != Cell::Free) {
    throw Error(ErrorCode::InvalidState, "start pose is not in truth free space");
  }
  SimState s;
  s.discovered = OccupancyGrid(truth.width(), truth.height(), truth.resolution(), truth.origin(),
                               Cell::Unknown);
  s.truth = std::move(truth);
  s.robot = pose;
  s.robot.theta = wrap_angle(pose.theta);
  s.heading_history.push_back({0.0, s.robot.theta});
  return s;
}

std::size_t sense(SimState& state, const SensorConfig& cfg) {
  cfg.validate();
  const auto cell = state.truth.world_to_cell(state.robot.position());
  if (!cell || state.truth.at(*cell) == Cell::Occupied) {
    throw Error(ErrorCode::InvalidState, "robot is not in truth free space");
  }
  std::size_t changed = 0;
  auto& disc = state.discovered;
  const auto mark = [&](CellIndex c, Cell v) {
    if (disc.at(c) != v) {
      disc.set(c, v);
      ++changed;
    }
  };
  for (double offset : cfg.beam_offsets()) {
    const auto hit = raycast(state.truth, state.robot.position(), state.robot.theta + offset,
                             cfg.max_range, [&](CellIndex c, double) { mark(c, Cell::Free); });
    if (hit.terminal == RayTerminal::Obstacle) mark(hit.hit_cell, Cell::Occupied);
  }
  return changed;
}

namespace {

void record_heading(SimState& state) {
  auto& h = state.heading_history;
  h.push_back({state.sim_time, state.robot.theta});
  while (h.size() > 1 && h.front().time < state.sim_time - kHeadingRetention - 1e-9) h.pop_front();
}

}  // namespace

StepOutcome step_along(SimState& state, std::deque<Point2>& path, double v_max, double dt,
                       const SensorConfig& cfg) {
  StepOutcome out;
  if (path.empty()) {
    out.empty_path = true;
    return out;
  }
  if (!(v_max > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "v_max and dt must be > 0");
  }

  double budget = v_max * dt;
  Point2 pos = state.robot.position();
  double theta = state.robot.theta;
  while (budget > 0.0 && !path.empty()) {
    const Point2 target = path.front();
    const double seg = distance(pos, target);
    if (seg <= 1e-12) {
      path.pop_front();
      continue;
    }
    theta = std::atan2(target.y - pos.y, target.x - pos.x);
    if (seg <= budget + 1e-9) {
      pos = target;
      budget -= seg;
      out.advanced += seg;
      path.pop_front();
    } else {
      pos.x += std::cos(theta) * budget;
      pos.y += std::sin(theta) * budget;
      out.advanced += budget;
      budget = 0.0;
    }
  }
  out.reached_end = path.empty();

  state.robot = {pos.x, pos.y, wrap_angle(theta)};
  state.sim_time += dt;
  state.distance_travelled += out.advanced;
  record_heading(state);
  out.sensed = sense(state, cfg);
  return out;
}

void advance_idle(SimState& state, double dt) {
  state.sim_time += dt;
  record_heading(state);
}

std::size_t turn_to(SimState& state, double theta, double dt, const SensorConfig& cfg) {
  state.robot.theta = wrap_angle(theta);
  state.sim_time += dt;
  record_heading(state);
  return sense(state, cfg);
}

double heading_change(const SimState& state, double window) {
  const auto& h = state.heading_history;
  if (h.empty() || !(window > 0.0)) return 0.0;
  const double target = state.sim_time - window;
  if (h.front().time > target + 1e-9) return 0.0;
  std::size_t k = 0;
  while (k + 1 < h.size() && h[k + 1].time <= target + 1e-9) ++k;
  double total = 0.0;
  for (std::size_t i = k; i + 1 < h.size(); ++i) total += wrap_angle(h[i + 1].theta - h[i].theta);
  return std::abs(total);
}

CoverageTracker::CoverageTracker(const OccupancyGrid& truth, Point2 start)
    : reachable_(truth.width(), truth.height(), 0) {
  const auto cell = truth.world_to_cell(start);
  if (!cell || truth.at(*cell) != Cell::Free) {
    throw Error(ErrorCode::InvalidState, "coverage start is not in truth free space");
  }
  std::vector<CellIndex> stack{*cell};
  reachable_[*cell] = 1;
  while (!stack.empty()) {
    const auto c = stack.back();
    stack.pop_back();
    ++reachable_count_;
    for (int k = 0; k < 4; ++k) {
      const CellIndex n{c.col + k4Dc[k], c.row + k4Dr[k]};
      if (truth.contains(n) && !reachable_[n] && truth.at(n) == Cell::Free) {
        reachable_[n] = 1;
        stack.push_back(n);
      }
    }
  }
}

double CoverageTracker::coverage(const OccupancyGrid& discovered) const {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < discovered.size(); ++i) {
    if (reachable_[i] && discovered.at(i) == Cell::Free) ++seen;
  }
  return static_cast<double>(seen) / static_cast<double>(reachable_count_);
}

double coverage(const SimState& state, const CoverageTracker& tracker) {
  return tracker.coverage(state.discovered);
}

std::string serialize_snapshot(const SimState& state) {
  char line[160];
  std::snprintf(line, sizeof line, "pose %.9f %.9f %.9f %.6f %.9f\n", state.robot.x, state.robot.y,
                state.robot.theta, state.sim_time, state.distance_travelled);
  return to_ascii(state.discovered) + line;
}

Snapshot parse_snapshot(std::string_view text, double resolution, Point2 origin) {
  const auto at = text.find("pose ");
  if (at == std::string_view::npos || (at > 0 && text[at - 1] != '\n')) {
    throw Error(ErrorCode::MalformedMap, "snapshot has no pose line");
  }
  Snapshot snap;
  snap.discovered = parse_ascii_map(text.substr(0, at), resolution, origin);
  std::istringstream in{std::string(text.substr(at + 5))};
  if (!(in >> snap.robot.x >> snap.robot.y >> snap.robot.theta >> snap.sim_time >>
        snap.distance_travelled)) {
    throw Error(ErrorCode::MalformedMap, "malformed pose line (byte " + std::to_string(at) + ")");
  }
  return snap;
}

}  // namespace explore
