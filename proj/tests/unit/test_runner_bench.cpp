#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "explore/bench.hpp"
#include "explore/config.hpp"
#include "explore/error.hpp"
#include "explore/runner.hpp"
#include "oracles.hpp"

using namespace explore;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::size_t commas(const std::string& s) { return std::count(s.begin(), s.end(), ','); }

OccupancyGrid two_rooms() {
  return oracle::ascii({
      "######################",
      "#.........#..........#",
      "#.........#..........#",
      "#.........#..........#",
      "#....................#",
      "#....................#",
      "#.........#..........#",
      "#.........#..........#",
      "#.........#..........#",
      "######################",
  }, 0.4);
}

}  // namespace

TEST_CASE("jittered start stays within a quarter cell of the base cell center") {
  const auto g = two_rooms();
  const Pose base{1.1, 1.3, 0.0};
  const auto center = g.cell_center(*g.world_to_cell(base.position()));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = jittered_start(g, base, seed);
    CHECK(std::abs(p.x - center.x) <= 0.25 * g.resolution());
    CHECK(std::abs(p.y - center.y) <= 0.25 * g.resolution());
    CHECK(p.theta > -std::numbers::pi);
    CHECK(p.theta <= std::numbers::pi);
    CHECK(p == jittered_start(g, base, seed));
  }
  CHECK_FALSE(jittered_start(g, base, 1) == jittered_start(g, base, 2));
}

TEST_CASE("junction zone covers a Chebyshev square around the crossing") {
  // Plus-shaped corridors three cells wide crossing at the center.
  std::vector<std::string> rows(21, std::string(21, '#'));
  for (int i = 1; i < 20; ++i) {
    for (int k = 9; k <= 11; ++k) {
      rows[i][k] = '.';
      rows[k][i] = '.';
    }
  }
  const auto g = oracle::ascii(rows, 0.2);
  const auto zone = junction_zone(g);
  CHECK(zone[CellIndex{10, 10}]);
  CHECK(zone[CellIndex{12, 12}]);
  CHECK_FALSE(zone[CellIndex{10, 3}]);
  CHECK_FALSE(zone[CellIndex{17, 10}]);
  CHECK(junction_zone(g, 0)[CellIndex{10, 10}]);
  CHECK_FALSE(junction_zone(g, 0)[CellIndex{11, 11}]);
}

TEST_CASE("prepared paths start at the robot") {
  const auto g = two_rooms();
  const auto joined = prepare_path(g, {1.0, 1.0}, {{1.4, 1.0}, {3.0, 1.0}});
  REQUIRE(joined.size() == 2);
  CHECK(joined.front() == Point2{1.0, 1.0});
  CHECK(joined.back() == Point2{3.0, 1.0});
  // The straight hop from the robot to the second point would cross the wall.
  const auto bent = prepare_path(g, {3.8, 1.0}, {{3.8, 1.0}, {3.8, 1.8}, {4.6, 1.0}});
  CHECK(bent.front() == Point2{3.8, 1.0});
  CHECK(bent.size() == 3);
}

TEST_CASE("small exploration run finishes, records monotone coverage and reproduces") {
  const auto g = two_rooms();
  ExplorationConfig cfg;
  cfg.max_sim_time = 400.0;
  for (const auto& policy : policy_names()) {
    CAPTURE(policy);
    const auto start = jittered_start(g, {1.0, 1.0, 0.0}, 3);
    const auto run = run_exploration(g, start, policy, 3, cfg);
    CHECK(run.status == RunStatus::Done);
    CHECK(run.final_coverage >= 0.95);
    REQUIRE_FALSE(run.records.empty());
    CHECK(run.records.front().sim_time == 0.0);
    for (std::size_t i = 0; i < run.records.size(); ++i) {
      const auto& r = run.records[i];
      CHECK(r.discovered_free_fraction >= 0.0);
      CHECK(r.discovered_free_fraction <= 1.0);
      if (i > 0) {
        CHECK(r.discovered_free_fraction >= run.records[i - 1].discovered_free_fraction);
        CHECK(r.distance_travelled >= run.records[i - 1].distance_travelled);
      }
    }
    if (run.t60 && run.t80) CHECK(*run.t60 <= *run.t80);
    if (run.t80 && run.t90) CHECK(*run.t80 <= *run.t90);
    CHECK(run.reversals >= 0);
    const auto again = run_exploration(g, start, policy, 3, cfg);
    CHECK(records_csv(run) == records_csv(again));
    CHECK(trace_csv(run) == trace_csv(again));
  }
}

TEST_CASE("time limit ends a run without failing it") {
  const auto g = two_rooms();
  ExplorationConfig cfg;
  cfg.max_sim_time = 3.0;
  const auto run = run_exploration(g, {1.0, 1.0, 0.0}, "greedy", 1, cfg);
  CHECK(run.status == RunStatus::TimeLimit);
  CHECK(run.sim_time <= 3.0 + cfg.dt);
  CHECK(std::string(to_string(RunStatus::TimeLimit)) == "time_limit");
  CHECK(std::string(to_string(RunStatus::Done)) == "done");
  CHECK(std::string(to_string(RunStatus::Failed)) == "failed");
}

TEST_CASE("csv outputs have fixed headers and column counts") {
  const auto g = two_rooms();
  ExplorationConfig cfg;
  cfg.max_sim_time = 60.0;
  const auto run = run_exploration(g, {1.0, 1.0, 0.0}, "hierarchical", 2, cfg);
  const auto rec = lines_of(records_csv(run));
  REQUIRE(rec.size() == run.records.size() + 1);
  CHECK(rec[0] == "sim_time,coverage,distance,stage");
  for (std::size_t i = 1; i < rec.size(); ++i) {
    CHECK(commas(rec[i]) == 3);
    const auto stage = rec[i].substr(rec[i].rfind(',') + 1);
    CHECK((stage == "local" || stage == "global" || stage == "idle"));
  }
  char first[64];
  std::snprintf(first, sizeof first, "0.0,%.6f,0.0000,", run.records[0].discovered_free_fraction);
  CHECK(rec[1].rfind(first, 0) == 0);

  const auto tr = lines_of(trace_csv(run));
  REQUIRE(tr.size() == run.trace.size() + 1);
  CHECK(tr[0] == "time,robot_x,robot_y,action,filter_fired,goal_source,goal_x,goal_y,coverage,frontiers");
  for (std::size_t i = 1; i < tr.size(); ++i) {
    CHECK(commas(tr[i]) == 9);
    if (!run.trace[i - 1].goal) CHECK(tr[i].find(",none,,,") != std::string::npos);
  }
}

TEST_CASE("summaries drop failed runs and censor missing milestones") {
  RunResult a, b, c;
  a.status = RunStatus::Done;
  a.t60 = 10.0;
  a.t80 = 20.0;
  a.t90 = 30.0;
  a.distance = 5.0;
  a.final_coverage = 1.0;
  a.reversals = 2;
  b.status = RunStatus::TimeLimit;
  b.t60 = 50.0;
  b.distance = 7.0;
  b.final_coverage = 0.7;
  c.status = RunStatus::Failed;
  c.t60 = 1.0;
  c.distance = 1000.0;
  const auto row = summarize("greedy", {a, b, c}, 100.0);
  CHECK(row.runs == 3);
  CHECK(row.failed == 1);
  CHECK(row.mean_t60 == doctest::Approx(30.0));
  CHECK(row.mean_t80 == doctest::Approx(60.0));
  CHECK(row.mean_t90 == doctest::Approx(65.0));
  CHECK(row.mean_distance == doctest::Approx(6.0));
  CHECK(row.mean_final_coverage == doctest::Approx(0.85));
  CHECK(row.mean_reversals == doctest::Approx(1.0));
  const auto csv = lines_of(summary_csv({row}));
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] ==
        "policy,runs,failed,mean_t60,mean_t80,mean_t90,mean_distance,mean_final_coverage,mean_reversals");
  CHECK(csv[1] == "greedy,3,1,30.00,60.00,65.00,6.000,0.8500,1.00");
}

TEST_CASE("snapshots fire once per requested time and render the documented gray levels") {
  const auto g = two_rooms();
  ExplorationConfig cfg;
  cfg.max_sim_time = 30.0;
  RunOptions opt;
  opt.snapshot_times = {2.5, 0.0, 1.0, 1e6};
  std::vector<double> fired;
  opt.on_snapshot = [&](const SimState& s, const Policy& p, double requested) {
    CHECK(s.sim_time >= requested - 1e-9);
    CHECK(s.sim_time < requested + cfg.dt + 1e-9);
    fired.push_back(requested);
    const auto img = render_snapshot(s, p.current_goal(), {1.0, 1.0}, cfg);
    REQUIRE(img.width() == s.discovered.width());
    const auto rc = *s.discovered.world_to_cell(s.robot.position());
    CHECK(img[rc] == gray::kRobot);
    for (std::size_t i = 0; i < img.size(); ++i) {
      const auto v = img[i];
      switch (s.discovered.at(i)) {
        case Cell::Occupied: CHECK((v == gray::kOccupied || v == gray::kRobot)); break;
        case Cell::Unknown:
          CHECK((v == gray::kUnknown || v == gray::kFrontier || v == gray::kGoal)); break;
        case Cell::Free:
          CHECK((v == gray::kFree || v == gray::kSkeleton || v == gray::kStem ||
                 v == gray::kBranch || v == gray::kGoal || v == gray::kRobot));
          break;
      }
    }
  };
  const auto run = run_exploration(g, {1.0, 1.0, 0.0}, "hierarchical", 4, cfg, opt);
  CHECK(run.sim_time > 2.5);
  // Times past the end of the run never fire.
  CHECK(fired == std::vector<double>{0.0, 1.0, 2.5});
}

TEST_CASE("config keys apply, validate and load from text") {
  ExplorationConfig cfg;
  const auto keys = config_keys();
  CHECK(keys.size() == 24);
  CHECK(std::find(keys.begin(), keys.end(), "main_path_fraction") != keys.end());
  CHECK(std::find(keys.begin(), keys.end(), "fov_deg") != keys.end());
  cfg.apply("v_max", "0.8");
  CHECK(cfg.v_max == 0.8);
  cfg.apply("fov_deg", "180");
  CHECK(cfg.sensor.fov == doctest::Approx(std::numbers::pi));
  cfg.apply("rrt_extensions", "50");
  CHECK(cfg.rrt_extensions == 50);
  CHECK(code_of([&] { cfg.apply("nope", "1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { cfg.apply("dt", "fast"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { cfg.apply("rrt_extensions", "2.5"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { cfg.apply("min_frontier_size", "0"); }) == ErrorCode::InvalidArgument);
  cfg.validate();
  auto bad = cfg;
  bad.dt = 0.0;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidArgument);
  bad = cfg;
  bad.main_path_fraction = 1.5;
  CHECK(code_of([&] { bad.validate(); }) == ErrorCode::InvalidArgument);

  ExplorationConfig txt;
  apply_config_text(txt, "# comment\n\n w_s = 0.5 \ninflation=0.1 # trailing\n");
  CHECK(txt.w_s == 0.5);
  CHECK(txt.inflation == 0.1);
  CHECK(code_of([&] { apply_config_text(txt, "just words\n"); }) == ErrorCode::InvalidArgument);

  const auto path = std::filesystem::temp_directory_path() / "explore_cfg_test.cfg";
  {
    std::ofstream out(path);
    out << "max_sim_time = 120\nplanning_period=0.5\n";
  }
  const auto loaded = load_config(path);
  CHECK(loaded.max_sim_time == 120.0);
  CHECK(loaded.planning_period == 0.5);
  CHECK(loaded.v_max == 0.5);
  std::filesystem::remove(path);
}

TEST_CASE("bench argument helpers") {
  CHECK(parse_pose_set("all", 4) == std::vector<int>{0, 1, 2, 3});
  CHECK(parse_pose_set("2", 4) == std::vector<int>{2});
  CHECK(parse_pose_set("3,0", 4) == std::vector<int>{3, 0});
  CHECK(code_of([] { parse_pose_set("4", 4); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_pose_set("x", 4); }) == ErrorCode::InvalidArgument);
  CHECK(split_list("greedy,rrt") == std::vector<std::string>{"greedy", "rrt"});
  CHECK(split_list("hierarchical") == std::vector<std::string>{"hierarchical"});
  const auto p = parse_pose("1.5,-2,0.25");
  CHECK(p == Pose{1.5, -2.0, 0.25});
  CHECK(code_of([] { parse_pose("1,2"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_pose("a,b,c"); }) == ErrorCode::InvalidArgument);
  CHECK(job_stem({"greedy", 0, 7}, false) == std::filesystem::path("greedy/7"));
  CHECK(job_stem({"rrt", 2, 7}, true) == std::filesystem::path("rrt/pose2/7"));
}

TEST_CASE("bundled maps resolve by name and carry four start poses") {
  for (const char* name : {"maze64", "corridor_office", "open_rooms"}) {
    CAPTURE(name);
    const auto path = resolve_map(name, bundled_maps_dir());
    REQUIRE(path);
    const auto m = load_bench_map(*path);
    CHECK(m.starts.size() == 4);
    for (const auto& s : m.starts) CHECK(m.grid.at(*m.grid.world_to_cell(s.position())) == Cell::Free);
    CHECK(resolve_map(path->string(), "/nonexistent") == path);
  }
  CHECK_FALSE(resolve_map("no_such_map", bundled_maps_dir()));
}

TEST_CASE("run_job starts from the jittered pose of the selected start") {
  const auto m = load_bench_map(*resolve_map("open_rooms", bundled_maps_dir()));
  ExplorationConfig cfg;
  cfg.max_sim_time = 5.0;
  const auto run = run_job(m, {"greedy", 2, 11}, cfg);
  CHECK(run.start == jittered_start(m.grid, m.starts[2], 11));
  CHECK(run.seed == 11);
  CHECK(run.policy == "greedy");
}
