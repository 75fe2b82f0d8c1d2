#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "explore/sim.hpp"

namespace explore {

/// Every tunable of a run. Field names double as configuration keys.
struct ExplorationConfig {
  SensorConfig sensor{};
  double v_max = 0.5;                // m/s
  double dt = 0.1;                   // s
  std::size_t min_frontier_size = 5; // cells
  double window_half_extent = 4.0;   // m
  double heading_threshold_deg = 150.0;
  double heading_window = 2.0;       // s
  double planning_period = 1.0;      // s
  double goal_tolerance = 0.3;       // m
  double blacklist_ttl = 30.0;       // s
  double inflation = 0.25;           // m
  double main_path_fraction = 0.3;
  double w_d = 1.0;
  double w_s = 1.0;
  int rrt_extensions = 200;
  double rrt_step = 0.5;             // m
  double rrt_gain_radius = 1.0;      // m
  int rrt_idle_cycles = 5;
  double max_sim_time = 3600.0;      // s
  double wall_budget = 60.0;         // s, wall clock
  double record_period = 1.0;        // s

  /// Sets one field from its textual value. Throws InvalidArgument for an
  /// unknown key or an unparsable value.
  void apply(std::string_view key, std::string_view value);
  void validate() const;
};

/// Every key accepted by ExplorationConfig::apply, in documentation order.
std::vector<std::string> config_keys();

/// Applies `key=value` lines; blank lines and `#` comments are skipped.
void apply_config_text(ExplorationConfig& cfg, std::string_view text);
ExplorationConfig load_config(const std::filesystem::path& path, ExplorationConfig base = {});

}  // namespace explore
