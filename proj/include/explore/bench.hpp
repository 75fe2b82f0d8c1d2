#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "explore/config.hpp"
#include "explore/grid.hpp"
#include "explore/runner.hpp"
#include "explore/sim.hpp"

namespace explore {

struct BenchMap {
  std::string name;
  std::filesystem::path path;
  OccupancyGrid grid;
  /// `start0`..`startN` from the sidecar, in index order.
  std::vector<Pose> starts;
};

/// Directory holding the bundled fixtures.
std::filesystem::path bundled_maps_dir();

/// An existing file path is loaded as is; otherwise `<maps_dir>/<name>.map`
/// (then `.pgm`). nullopt when neither exists.
std::optional<std::filesystem::path> resolve_map(std::string_view name_or_path,
                                                 const std::filesystem::path& maps_dir);

/// Loads the map and its start poses. A map without `startK` keys gets one
/// start at the first free cell in row-major order.
BenchMap load_bench_map(const std::filesystem::path& path);

/// `x,y,theta`
Pose parse_pose(std::string_view text);

/// "all", a single index or a comma list. Indices are checked against `available`.
std::vector<int> parse_pose_set(std::string_view text, std::size_t available);

/// Comma-separated list of non-empty items.
std::vector<std::string> split_list(std::string_view text);

struct BenchJob {
  std::string policy;
  int pose_index = 0;
  std::uint64_t seed = 0;
};

/// Output file stem for a job: `<policy>/<seed>` or `<policy>/pose<k>/<seed>`.
std::filesystem::path job_stem(const BenchJob& job, bool multiple_poses);

/// Runs a job from the seed-jittered start pose.
RunResult run_job(const BenchMap& map, const BenchJob& job, const ExplorationConfig& cfg,
                  const RunOptions& options = {});

}  // namespace explore
