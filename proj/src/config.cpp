#include "explore/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "explore/error.hpp"
#include "explore/map_io.hpp"

namespace explore {

namespace {

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument,
                "bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

long long parse_int(std::string_view key, std::string_view text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::InvalidArgument,
                "bad integer '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

using Setter = std::function<void(ExplorationConfig&, std::string_view, std::string_view)>;

Setter real(double ExplorationConfig::*field) {
  return [field](ExplorationConfig& c, std::string_view k, std::string_view v) {
    c.*field = parse_double(k, v);
  };
}

Setter integer(int ExplorationConfig::*field) {
  return [field](ExplorationConfig& c, std::string_view k, std::string_view v) {
    c.*field = static_cast<int>(parse_int(k, v));
  };
}

constexpr double kDeg = std::numbers::pi / 180.0;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"beam_count",
       [](ExplorationConfig& c, std::string_view k, std::string_view v) {
         c.sensor.beam_count = static_cast<int>(parse_int(k, v));
       }},
      {"fov_deg",
       [](ExplorationConfig& c, std::string_view k, std::string_view v) {
         c.sensor.fov = parse_double(k, v) * kDeg;
       }},
      {"max_range",
       [](ExplorationConfig& c, std::string_view k, std::string_view v) {
         c.sensor.max_range = parse_double(k, v);
       }},
      {"yaw_offset_deg",
       [](ExplorationConfig& c, std::string_view k, std::string_view v) {
         c.sensor.yaw_offset = parse_double(k, v) * kDeg;
       }},
      {"v_max", real(&ExplorationConfig::v_max)},
      {"dt", real(&ExplorationConfig::dt)},
      {"min_frontier_size",
       [](ExplorationConfig& c, std::string_view k, std::string_view v) {
         const auto n = parse_int(k, v);
         if (n < 1) throw Error(ErrorCode::InvalidArgument, "min_frontier_size must be >= 1");
         c.min_frontier_size = static_cast<std::size_t>(n);
       }},
      {"window_half_extent", real(&ExplorationConfig::window_half_extent)},
      {"heading_threshold_deg", real(&ExplorationConfig::heading_threshold_deg)},
      {"heading_window", real(&ExplorationConfig::heading_window)},
      {"planning_period", real(&ExplorationConfig::planning_period)},
      {"goal_tolerance", real(&ExplorationConfig::goal_tolerance)},
      {"blacklist_ttl", real(&ExplorationConfig::blacklist_ttl)},
      {"inflation", real(&ExplorationConfig::inflation)},
      {"main_path_fraction", real(&ExplorationConfig::main_path_fraction)},
      {"w_d", real(&ExplorationConfig::w_d)},
      {"w_s", real(&ExplorationConfig::w_s)},
      {"rrt_extensions", integer(&ExplorationConfig::rrt_extensions)},
      {"rrt_step", real(&ExplorationConfig::rrt_step)},
      {"rrt_gain_radius", real(&ExplorationConfig::rrt_gain_radius)},
      {"rrt_idle_cycles", integer(&ExplorationConfig::rrt_idle_cycles)},
      {"max_sim_time", real(&ExplorationConfig::max_sim_time)},
      {"wall_budget", real(&ExplorationConfig::wall_budget)},
      {"record_period", real(&ExplorationConfig::record_period)},
  };
  return table;
}

}  // namespace

void ExplorationConfig::apply(std::string_view key, std::string_view value) {
  for (const auto& [name, set] : setters()) {
    if (name == key) {
      set(*this, key, trim(value));
      return;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown config key '" + std::string(key) + "'");
}

void ExplorationConfig::validate() const {
  sensor.validate();
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be > 0");
  };
  positive(v_max, "v_max");
  positive(dt, "dt");
  positive(window_half_extent, "window_half_extent");
  positive(heading_window, "heading_window");
  positive(planning_period, "planning_period");
  positive(goal_tolerance, "goal_tolerance");
  positive(rrt_step, "rrt_step");
  positive(max_sim_time, "max_sim_time");
  positive(wall_budget, "wall_budget");
  positive(record_period, "record_period");
  if (inflation < 0.0 || blacklist_ttl < 0.0 || rrt_gain_radius < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "negative radius or duration in config");
  }
  if (main_path_fraction < 0.0 || main_path_fraction > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "main_path_fraction must be in [0, 1]");
  }
  if (rrt_extensions < 1 || rrt_idle_cycles < 1) {
    throw Error(ErrorCode::InvalidArgument, "rrt_extensions and rrt_idle_cycles must be >= 1");
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& entry : setters()) out.push_back(entry.first);
  return out;
}

void apply_config_text(ExplorationConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  "config line " + std::to_string(line_no) + " is not key=value");
    }
    cfg.apply(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

ExplorationConfig load_config(const std::filesystem::path& path, ExplorationConfig base) {
  apply_config_text(base, read_file(path));
  base.validate();
  return base;
}

}  // namespace explore
