#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "explore/grid.hpp"

namespace explore {

enum class MapFormat { Ascii, Pgm };

/// Contents of the key=value sidecar that accompanies a map file.
/// Known keys are lifted into fields; everything else lands in `extra`.
struct MapMetadata {
  double resolution = 1.0;
  Point2 origin{};
  std::map<std::string, std::string> extra;
};

/// `maps/maze64.map` -> `maps/maze64.meta`
std::filesystem::path sidecar_path(const std::filesystem::path& map_path);

MapMetadata parse_metadata(std::string_view text);
/// Missing sidecar yields defaults (resolution 1, origin 0,0).
MapMetadata read_metadata(const std::filesystem::path& map_path);
std::string format_metadata(const MapMetadata& meta);

std::optional<MapFormat> format_for(const std::filesystem::path& path);

/// '.' Free, '#' Occupied, '?' Unknown; one text line per row, first line is row 0.
OccupancyGrid parse_ascii_map(std::string_view text, double resolution = 1.0, Point2 origin = {});
std::string to_ascii(const OccupancyGrid& grid);

/// Binary P5. Gray >= 250 Free, <= 50 Occupied, otherwise Unknown.
OccupancyGrid parse_pgm_map(std::string_view bytes, double resolution = 1.0, Point2 origin = {});

OccupancyGrid load_map(const std::filesystem::path& path, MapFormat format);
/// Format picked from the extension (.pgm -> Pgm, anything else Ascii).
OccupancyGrid load_map(const std::filesystem::path& path);

/// Writes the ASCII map and its sidecar.
void save_map(const OccupancyGrid& grid, const std::filesystem::path& path,
              const std::map<std::string, std::string>& extra = {});

void write_pgm(const Raster<std::uint8_t>& gray, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace explore
