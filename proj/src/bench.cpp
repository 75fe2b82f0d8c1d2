#include "explore/bench.hpp"

#include <charconv>
#include <cmath>

#include "explore/error.hpp"
#include "explore/map_io.hpp"

#ifndef EXPLORE_MAPS_DIR
#define EXPLORE_MAPS_DIR "maps"
#endif

namespace explore {

namespace fs = std::filesystem;

fs::path bundled_maps_dir() { return fs::path(EXPLORE_MAPS_DIR); }

std::optional<fs::path> resolve_map(std::string_view name_or_path, const fs::path& maps_dir) {
  const fs::path direct(name_or_path);
  if (fs::is_regular_file(direct)) return direct;
  for (const char* ext : {".map", ".pgm"}) {
    const auto candidate = maps_dir / (std::string(name_or_path) + ext);
    if (fs::is_regular_file(candidate)) return candidate;
  }
  return std::nullopt;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

Pose parse_pose(std::string_view text) {
  const auto parts = split_list(text);
  if (parts.size() != 3) {
    throw Error(ErrorCode::InvalidArgument, "pose '" + std::string(text) + "' is not x,y,theta");
  }
  double v[3];
  for (int i = 0; i < 3; ++i) {
    const auto& s = parts[i];
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v[i]);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, "bad pose component '" + s + "'");
    }
  }
  return {v[0], v[1], wrap_angle(v[2])};
}

BenchMap load_bench_map(const fs::path& path) {
  BenchMap map;
  map.path = path;
  map.name = path.stem().string();
  map.grid = load_map(path);
  const auto meta = read_metadata(path);
  for (int k = 0;; ++k) {
    const auto it = meta.extra.find("start" + std::to_string(k));
    if (it == meta.extra.end()) break;
    map.starts.push_back(parse_pose(it->second));
  }
  if (map.starts.empty()) {
    for (std::size_t i = 0; i < map.grid.size(); ++i) {
      if (map.grid.at(i) == Cell::Free) {
        const auto p = map.grid.cell_center(map.grid.cell_of(i));
        map.starts.push_back({p.x, p.y, 0.0});
        break;
      }
    }
  }
  if (map.starts.empty()) {
    throw Error(ErrorCode::InvalidState, "map " + path.string() + " has no free cell");
  }
  return map;
}

std::vector<int> parse_pose_set(std::string_view text, std::size_t available) {
  std::vector<int> out;
  if (text == "all") {
    for (std::size_t k = 0; k < available; ++k) out.push_back(static_cast<int>(k));
    return out;
  }
  for (const auto& item : split_list(text)) {
    int k = -1;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
    if (ec != std::errc{} || ptr != item.data() + item.size() || k < 0 ||
        static_cast<std::size_t>(k) >= available) {
      throw Error(ErrorCode::InvalidArgument, "start pose '" + item + "' is not available");
    }
    out.push_back(k);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty start pose set");
  return out;
}

fs::path job_stem(const BenchJob& job, bool multiple_poses) {
  fs::path stem(job.policy);
  if (multiple_poses) stem /= "pose" + std::to_string(job.pose_index);
  return stem / std::to_string(job.seed);
}

RunResult run_job(const BenchMap& map, const BenchJob& job, const ExplorationConfig& cfg,
                  const RunOptions& options) {
  const Pose start = jittered_start(map.grid, map.starts.at(job.pose_index), job.seed);
  return run_exploration(map.grid, start, job.policy, job.seed, cfg, options);
}

}  // namespace explore
