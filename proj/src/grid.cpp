#include "explore/grid.hpp"

#include <algorithm>
#include <string>

#include "explore/error.hpp"

namespace explore {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedMap: return "malformed-map";
    case ErrorCode::InvalidDimensions: return "invalid-dimensions";
    case ErrorCode::OutOfBounds: return "out-of-bounds";
    case ErrorCode::UndefinedField: return "undefined-field";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::ShapeMismatch: return "shape-mismatch";
    case ErrorCode::MissingNode: return "missing-node";
    case ErrorCode::OrphanBranch: return "orphan-branch";
    case ErrorCode::InvalidStart: return "invalid-start";
    case ErrorCode::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

namespace {

void check_shape(int width, int height, double resolution) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidDimensions,
                "grid must have positive area, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw Error(ErrorCode::InvalidDimensions, "resolution must be > 0");
  }
}

}  // namespace

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Point2 origin, Cell fill)
    : resolution_(resolution), origin_(origin) {
  check_shape(width, height, resolution);
  cells_ = Raster<Cell>(width, height, fill);
}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, Point2 origin,
                             std::vector<Cell> cells)
    : resolution_(resolution), origin_(origin) {
  check_shape(width, height, resolution);
  if (cells.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::InvalidDimensions, "cell array length does not match width*height");
  }
  cells_ = Raster<Cell>(width, height);
  std::copy(cells.begin(), cells.end(), cells_.data().begin());
}

bool OccupancyGrid::contains_point(Point2 p) const {
  const double fx = (p.x - origin_.x) / resolution_;
  const double fy = (p.y - origin_.y) / resolution_;
  return fx >= 0.0 && fy >= 0.0 && fx < width() && fy < height();
}

std::optional<CellIndex> OccupancyGrid::world_to_cell(Point2 p) const {
  if (!contains_point(p)) return std::nullopt;
  const int col = static_cast<int>(std::floor((p.x - origin_.x) / resolution_));
  const int row = static_cast<int>(std::floor((p.y - origin_.y) / resolution_));
  return CellIndex{std::min(col, width() - 1), std::min(row, height() - 1)};
}

std::size_t OccupancyGrid::count(Cell v) const {
  const auto cells = cells_.data();
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), v));
}

}  // namespace explore
