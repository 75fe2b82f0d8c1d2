#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace explore {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct CellIndex {
  int col = 0;
  int row = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
  friend auto operator<=>(const CellIndex& a, const CellIndex& b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.col <=> b.col;
  }
};

enum class Cell : std::uint8_t { Free, Occupied, Unknown };

/// 8-neighbourhood offsets in ring order starting at north (row - 1).
inline constexpr int kRingDc[8] = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr int kRingDr[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
inline constexpr int k4Dc[4] = {0, 1, 0, -1};
inline constexpr int k4Dr[4] = {-1, 0, 1, 0};

/// Row-major rectangular raster with no world frame attached.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  bool contains(CellIndex c) const {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }
  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.row) * width_ + c.col;
  }
  CellIndex cell_of(std::size_t i) const {
    return {static_cast<int>(i % width_), static_cast<int>(i / width_)};
  }

  T& operator[](CellIndex c) { return data_[index(c)]; }
  const T& operator[](CellIndex c) const { return data_[index(c)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<const T> data() const { return data_; }
  std::span<T> data() { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Tri-state occupancy grid. Cell (0,0) has its lower-left corner at origin;
/// row index grows with y, column index with x.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, Point2 origin = {},
                Cell fill = Cell::Unknown);
  OccupancyGrid(int width, int height, double resolution, Point2 origin, std::vector<Cell> cells);

  int width() const { return cells_.width(); }
  int height() const { return cells_.height(); }
  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }

  bool contains(CellIndex c) const { return cells_.contains(c); }
  std::size_t index(CellIndex c) const { return cells_.index(c); }
  CellIndex cell_of(std::size_t i) const { return cells_.cell_of(i); }
  std::size_t size() const { return cells_.size(); }

  Cell at(CellIndex c) const { return cells_[c]; }
  Cell at(std::size_t i) const { return cells_[i]; }
  void set(CellIndex c, Cell v) { cells_[c] = v; }
  void set(std::size_t i, Cell v) { cells_[i] = v; }

  /// Out-of-grid cells read as `outside`.
  Cell at_or(CellIndex c, Cell outside) const { return contains(c) ? cells_[c] : outside; }

  Point2 cell_center(CellIndex c) const {
    return {origin_.x + (c.col + 0.5) * resolution_, origin_.y + (c.row + 0.5) * resolution_};
  }
  bool contains_point(Point2 p) const;
  std::optional<CellIndex> world_to_cell(Point2 p) const;

  std::size_t count(Cell v) const;
  std::span<const Cell> cells() const { return cells_.data(); }
  const Raster<Cell>& raster() const { return cells_; }

  bool same_shape(const OccupancyGrid& other) const {
    return width() == other.width() && height() == other.height();
  }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  Raster<Cell> cells_;
  double resolution_ = 1.0;
  Point2 origin_{};
};

}  // namespace explore
