#include "explore/map_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "explore/error.hpp"

namespace explore {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::MalformedMap, "metadata key '" + key + "' is not a number: " + value);
  }
  return out;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& map_path) {
  auto p = map_path;
  p.replace_extension(".meta");
  return p;
}

MapMetadata parse_metadata(std::string_view text) {
  MapMetadata meta;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::MalformedMap,
                  "metadata line " + std::to_string(line_no) + " has no '='");
    }
    const auto key = trim(std::string_view(body).substr(0, eq));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    if (key == "resolution") {
      meta.resolution = parse_double(key, value);
    } else if (key == "origin_x") {
      meta.origin.x = parse_double(key, value);
    } else if (key == "origin_y") {
      meta.origin.y = parse_double(key, value);
    } else {
      meta.extra[key] = value;
    }
  }
  if (!(meta.resolution > 0.0)) {
    throw Error(ErrorCode::InvalidDimensions, "metadata resolution must be > 0");
  }
  return meta;
}

MapMetadata read_metadata(const std::filesystem::path& map_path) {
  const auto side = sidecar_path(map_path);
  if (!std::filesystem::exists(side)) return {};
  return parse_metadata(read_file(side));
}

std::string format_metadata(const MapMetadata& meta) {
  std::ostringstream out;
  out.precision(17);
  out << "resolution=" << meta.resolution << '\n'
      << "origin_x=" << meta.origin.x << '\n'
      << "origin_y=" << meta.origin.y << '\n';
  for (const auto& [k, v] : meta.extra) out << k << '=' << v << '\n';
  return out.str();
}

std::optional<MapFormat> format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".pgm") return MapFormat::Pgm;
  if (ext == ".map" || ext == ".txt" || ext.empty()) return MapFormat::Ascii;
  return std::nullopt;
}

OccupancyGrid parse_ascii_map(std::string_view text, double resolution, Point2 origin) {
  std::vector<Cell> cells;
  int width = -1;
  int height = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t line_start = pos;
    pos = end + 1;
    if (line.empty()) {
      // Blank lines are only tolerated at the end of the file.
      if (text.find_first_not_of("\r\n", pos) != std::string_view::npos) {
        throw Error(ErrorCode::MalformedMap, "blank line at line " + std::to_string(height + 1) +
                                                 " (byte " + std::to_string(line_start) + ")");
      }
      break;
    }
    if (width < 0) {
      width = static_cast<int>(line.size());
    } else if (static_cast<int>(line.size()) != width) {
      throw Error(ErrorCode::MalformedMap,
                  "line " + std::to_string(height + 1) + " has " + std::to_string(line.size()) +
                      " cells, expected " + std::to_string(width) + " (byte " +
                      std::to_string(line_start) + ")");
    }
    for (std::size_t i = 0; i < line.size(); ++i) {
      switch (line[i]) {
        case '.': cells.push_back(Cell::Free); break;
        case '#': cells.push_back(Cell::Occupied); break;
        case '?': cells.push_back(Cell::Unknown); break;
        default:
          throw Error(ErrorCode::MalformedMap,
                      "unexpected character '" + std::string(1, line[i]) + "' at line " +
                          std::to_string(height + 1) + " column " + std::to_string(i + 1) +
                          " (byte " + std::to_string(line_start + i) + ")");
      }
    }
    ++height;
  }
  if (width <= 0 || height == 0) {
    throw Error(ErrorCode::InvalidDimensions, "map has zero area");
  }
  return OccupancyGrid(width, height, resolution, origin, std::move(cells));
}

std::string to_ascii(const OccupancyGrid& grid) {
  std::string out;
  out.reserve(grid.size() + grid.height());
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      switch (grid.at(CellIndex{c, r})) {
        case Cell::Free: out += '.'; break;
        case Cell::Occupied: out += '#'; break;
        case Cell::Unknown: out += '?'; break;
      }
    }
    out += '\n';
  }
  return out;
}

OccupancyGrid parse_pgm_map(std::string_view bytes, double resolution, Point2 origin) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::MalformedMap, why + " (byte " + std::to_string(pos) + ")");
  };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_space();
    const auto start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) fail("expected integer in PGM header");
    long v = 0;
    std::from_chars(bytes.data() + start, bytes.data() + pos, v);
    return v;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') fail("not a binary PGM (P5)");
  pos = 2;
  const long width = read_int();
  const long height = read_int();
  const long maxval = read_int();
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidDimensions, "PGM has zero area");
  }
  if (maxval <= 0 || maxval > 255) fail("only 8-bit PGM is supported");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    fail("missing whitespace after PGM header");
  }
  ++pos;
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < n) fail("PGM raster truncated");

  std::vector<Cell> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto raw = static_cast<unsigned char>(bytes[pos + i]);
    const long gray = maxval == 255 ? raw : raw * 255L / maxval;
    cells[i] = gray >= 250 ? Cell::Free : gray <= 50 ? Cell::Occupied : Cell::Unknown;
  }
  return OccupancyGrid(static_cast<int>(width), static_cast<int>(height), resolution, origin,
                       std::move(cells));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OccupancyGrid load_map(const std::filesystem::path& path, MapFormat format) {
  const auto meta = read_metadata(path);
  const auto bytes = read_file(path);
  if (format == MapFormat::Pgm) return parse_pgm_map(bytes, meta.resolution, meta.origin);
  return parse_ascii_map(bytes, meta.resolution, meta.origin);
}

OccupancyGrid load_map(const std::filesystem::path& path) {
  return load_map(path, format_for(path).value_or(MapFormat::Ascii));
}

void save_map(const OccupancyGrid& grid, const std::filesystem::path& path,
              const std::map<std::string, std::string>& extra) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << to_ascii(grid);
  }
  MapMetadata meta{grid.resolution(), grid.origin(), extra};
  std::ofstream side(sidecar_path(path), std::ios::binary);
  side << format_metadata(meta);
}

void write_pgm(const Raster<std::uint8_t>& gray, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << "P5\n" << gray.width() << ' ' << gray.height() << "\n255\n";
  const auto data = gray.data();
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

}  // namespace explore
