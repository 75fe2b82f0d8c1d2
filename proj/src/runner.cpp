#include "explore/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "explore/gvd.hpp"
#include "explore/task_handler.hpp"

namespace explore {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Done: return "done";
    case RunStatus::TimeLimit: return "time_limit";
    case RunStatus::Failed: return "failed";
  }
  return "unknown";
}

const char* to_string(CycleAction a) {
  switch (a) {
    case CycleAction::Keep: return "keep";
    case CycleAction::Dispatch: return "dispatch";
    case CycleAction::Idle: return "idle";
    case CycleAction::Done: return "done";
  }
  return "unknown";
}

Raster<std::uint8_t> junction_zone(const OccupancyGrid& truth, int radius) {
  const auto gvd = extract_gvd(truth);
  Raster<std::uint8_t> zone(truth.width(), truth.height(), 0);
  for (std::size_t i = 0; i < gvd.flags.size(); ++i) {
    if (!gvd.flags[i]) continue;
    const auto c = gvd.flags.cell_of(i);
    if (skeleton_degree(gvd.flags, c) < 3) continue;
    for (int dr = -radius; dr <= radius; ++dr) {
      for (int dc = -radius; dc <= radius; ++dc) {
        const CellIndex n{c.col + dc, c.row + dr};
        if (zone.contains(n)) zone[n] = 1;
      }
    }
  }
  return zone;
}

Pose jittered_start(const OccupancyGrid& truth, Pose base, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto cell = truth.world_to_cell(base.position());
  const Point2 center = cell ? truth.cell_center(*cell) : base.position();
  const double q = 0.25 * truth.resolution();
  const double dx = (2.0 * unit_uniform(rng) - 1.0) * q;
  const double dy = (2.0 * unit_uniform(rng) - 1.0) * q;
  const double theta = wrap_angle(std::numbers::pi - 2.0 * std::numbers::pi * unit_uniform(rng));
  return {center.x + dx, center.y + dy, theta};
}

namespace {

bool segment_on_free(const OccupancyGrid& grid, Point2 a, Point2 b) {
  const double len = distance(a, b);
  const double step = 0.05 * grid.resolution();
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const auto c = grid.world_to_cell({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
    if (!c || grid.at(*c) != Cell::Free) return false;
  }
  return true;
}

std::optional<double>& milestone_slot(RunResult& r, int k) {
  return k == 0 ? r.t60 : (k == 1 ? r.t80 : r.t90);
}

constexpr double kMilestones[3] = {0.6, 0.8, 0.9};

}  // namespace

std::deque<Point2> prepare_path(const OccupancyGrid& discovered, Point2 robot,
                                const std::vector<Point2>& planned) {
  std::deque<Point2> path(planned.begin(), planned.end());
  if (path.empty()) return path;
  if (path.size() >= 2 && segment_on_free(discovered, robot, path[1])) {
    path.front() = robot;
  } else {
    path.push_front(robot);
  }
  return path;
}

RunResult run_exploration(const OccupancyGrid& truth, Pose start, const std::string& policy_name,
                          std::uint64_t seed, const ExplorationConfig& cfg,
                          const RunOptions& options) {
  cfg.validate();
  const auto wall_start = std::chrono::steady_clock::now();
  RunResult result;
  result.policy = policy_name;
  result.seed = seed;
  result.start = start;

  SimState state = SimState::start(truth, start);
  sense(state, cfg.sensor);
  const CoverageTracker tracker(truth, start.position());
  const auto zone = junction_zone(truth);
  auto policy = make_policy(policy_name, cfg, seed ^ 0x9e3779b97f4a7c15ULL, start.position());

  const auto steps_for = [&](double period) {
    return std::max<long>(1, std::lround(period / cfg.dt));
  };
  const long plan_steps = steps_for(cfg.planning_period);
  const long record_steps = steps_for(cfg.record_period);
  const long max_steps = std::lround(cfg.max_sim_time / cfg.dt);

  double cov = coverage(state, tracker);
  Stage stage = Stage::Idle;
  auto update_milestones = [&] {
    for (int k = 0; k < 3; ++k) {
      auto& slot = milestone_slot(result, k);
      if (!slot && cov >= kMilestones[k]) slot = state.sim_time;
    }
  };
  auto push_record = [&] {
    result.records.push_back({state.sim_time, cov, state.distance_travelled, stage});
  };
  update_milestones();
  push_record();

  std::vector<double> pending_snaps = options.snapshot_times;
  std::sort(pending_snaps.begin(), pending_snaps.end());
  std::size_t next_snap = 0;

  std::deque<Point2> path;
  bool had_path = false;
  bool moved_before = false;
  double last_heading = 0.0;
  long step = 0;
  result.status = RunStatus::TimeLimit;

  while (true) {
    if (step >= max_steps) break;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    if (wall > cfg.wall_budget) {
      result.status = RunStatus::Failed;
      break;
    }

    // On arrival the robot first turns toward its goal so that a target in
    // the sensor's blind sector gets observed before the next decision.
    std::optional<double> face;
    if (path.empty() && had_path) {
      if (const auto goal = policy->current_goal()) {
        const Point2 p = state.robot.position();
        const double d = distance(goal->target.position(), p);
        const double theta = goal->source == GoalSource::GlobalTopo || d < 1e-6
                                 ? goal->target.theta
                                 : std::atan2(goal->target.y - p.y, goal->target.x - p.x);
        if (std::abs(wrap_angle(theta - state.robot.theta)) > 1e-9) face = theta;
      }
    }
    const bool due = !face && (step % plan_steps == 0 || (path.empty() && had_path));
    if (due) {
      const auto cycle = policy->plan(state, path.empty());
      result.trace.push_back(
          {state.sim_time, state.robot, cycle.action, cycle.filter_fired, cycle.goal, cov, cycle.frontier_count});
      if (cycle.action == CycleAction::Done) {
        result.status = RunStatus::Done;
        stage = Stage::Idle;
        break;
      }
      if (cycle.action == CycleAction::Dispatch) {
        path = prepare_path(state.discovered, state.robot.position(), cycle.path);
      } else if (cycle.action == CycleAction::Idle) {
        path.clear();
      }
      const auto goal = policy->current_goal();
      stage = goal && !path.empty() ? stage_of(goal->source) : Stage::Idle;
    }

    while (next_snap < pending_snaps.size() && pending_snaps[next_snap] <= state.sim_time + 1e-9) {
      if (options.on_snapshot) options.on_snapshot(state, *policy, pending_snaps[next_snap]);
      ++next_snap;
    }

    if (face) {
      if (turn_to(state, *face, cfg.dt, cfg.sensor) > 0) cov = coverage(state, tracker);
    } else if (had_path = !path.empty(); path.empty()) {
      advance_idle(state, cfg.dt);
    } else {
      const Point2 before = state.robot.position();
      const auto outcome = step_along(state, path, cfg.v_max, cfg.dt, cfg.sensor);
      if (outcome.sensed > 0) cov = coverage(state, tracker);
      if (outcome.advanced > 1e-6) {
        const Point2 after = state.robot.position();
        const double heading = std::atan2(after.y - before.y, after.x - before.x);
        if (moved_before) {
          const double turn = std::abs(wrap_angle(heading - last_heading));
          const auto cell = truth.world_to_cell(after);
          if (turn > kReversalThresholdDeg * std::numbers::pi / 180.0 && cell && !zone[*cell]) {
            ++result.reversals;
          }
        }
        last_heading = heading;
        moved_before = true;
      }
    }
    ++step;
    update_milestones();
    if (step % record_steps == 0) push_record();
  }

  if (result.records.back().sim_time != state.sim_time) {
    push_record();
  }
  result.final_coverage = cov;
  result.distance = state.distance_travelled;
  result.sim_time = state.sim_time;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

std::string records_csv(const RunResult& run) {
  std::string out = "sim_time,coverage,distance,stage\n";
  char buf[128];
  for (const auto& r : run.records) {
    std::snprintf(buf, sizeof buf, "%.1f,%.6f,%.4f,%s\n", r.sim_time, r.discovered_free_fraction,
                  r.distance_travelled, to_string(r.active_stage));
    out += buf;
  }
  return out;
}

std::string trace_csv(const RunResult& run) {
  std::string out = "time,robot_x,robot_y,action,filter_fired,goal_source,goal_x,goal_y,coverage,frontiers\n";
  char buf[256];
  for (const auto& t : run.trace) {
    if (t.goal) {
      std::snprintf(buf, sizeof buf, "%.1f,%.4f,%.4f,%s,%d,%s,%.4f,%.4f,%.6f,%zu\n", t.time,
                    t.robot.x, t.robot.y, to_string(t.action), t.filter_fired ? 1 : 0, to_string(t.goal->source),
                    t.goal->target.x, t.goal->target.y, t.coverage, t.frontiers);
    } else {
      std::snprintf(buf, sizeof buf, "%.1f,%.4f,%.4f,%s,%d,none,,,%.6f,%zu\n", t.time, t.robot.x,
                    t.robot.y, to_string(t.action),
                    t.filter_fired ? 1 : 0, t.coverage, t.frontiers);
    }
    out += buf;
  }
  return out;
}

SummaryRow summarize(const std::string& policy, const std::vector<RunResult>& runs,
                     double censor_time) {
  SummaryRow row;
  row.policy = policy;
  row.runs = runs.size();
  std::size_t ok = 0;
  for (const auto& r : runs) {
    if (r.status == RunStatus::Failed) {
      ++row.failed;
      continue;
    }
    ++ok;
    row.mean_t60 += r.t60.value_or(censor_time);
    row.mean_t80 += r.t80.value_or(censor_time);
    row.mean_t90 += r.t90.value_or(censor_time);
    row.mean_distance += r.distance;
    row.mean_final_coverage += r.final_coverage;
    row.mean_reversals += r.reversals;
  }
  if (ok > 0) {
    const double n = static_cast<double>(ok);
    row.mean_t60 /= n;
    row.mean_t80 /= n;
    row.mean_t90 /= n;
    row.mean_distance /= n;
    row.mean_final_coverage /= n;
    row.mean_reversals /= n;
  }
  return row;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "policy,runs,failed,mean_t60,mean_t80,mean_t90,mean_distance,mean_final_coverage,"
      "mean_reversals\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.2f,%.2f,%.2f,%.3f,%.4f,%.2f\n", r.policy.c_str(),
                  r.runs, r.failed, r.mean_t60, r.mean_t80, r.mean_t90, r.mean_distance,
                  r.mean_final_coverage, r.mean_reversals);
    out += buf;
  }
  return out;
}

Raster<std::uint8_t> render_snapshot(const SimState& sim, const std::optional<ExplorationGoal>& goal,
                                     Point2 run_start, const ExplorationConfig& cfg) {
  const auto& grid = sim.discovered;
  Raster<std::uint8_t> img(grid.width(), grid.height(), gray::kUnknown);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Cell c = grid.at(i);
    img[i] = c == Cell::Free ? gray::kFree : (c == Cell::Occupied ? gray::kOccupied : gray::kUnknown);
  }
  const auto frontiers = detect_frontiers(grid, cfg.min_frontier_size);
  const auto plan = plan_global(grid, frontiers, sim.robot, run_start, cfg.main_path_fraction);
  for (std::size_t i = 0; i < plan.gvd.flags.size(); ++i) {
    if (plan.gvd.flags[i]) img[i] = gray::kSkeleton;
  }
  for (const auto& n : plan.graph.nodes) {
    img[n.cell] = n.kind == NodeKind::Stem ? gray::kStem : gray::kBranch;
  }
  for (const auto& f : frontiers) {
    for (const auto& c : f.cells) img[c] = gray::kFrontier;
  }
  if (goal && img.contains(goal->cell)) img[goal->cell] = gray::kGoal;
  if (const auto rc = grid.world_to_cell(sim.robot.position())) img[*rc] = gray::kRobot;
  return img;
}

}  // namespace explore
