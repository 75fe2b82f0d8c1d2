#include "explore/distance_field.hpp"

#include <algorithm>
#include <limits>

#include "explore/error.hpp"

namespace explore {

namespace {
constexpr int kFar = std::numeric_limits<int>::max() / 4;
}

Raster<int> chamfer_34(const Raster<std::uint8_t>& obstacle) {
  const int w = obstacle.width();
  const int h = obstacle.height();
  Raster<int> d(w, h, kFar);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (obstacle[i]) d[i] = 0;
  }

  auto relax = [&](int c, int r, int nc, int nr, int cost) {
    if (nc < 0 || nr < 0 || nc >= w || nr >= h) return;
    auto& here = d[CellIndex{c, r}];
    here = std::min(here, d[CellIndex{nc, nr}] + cost);
  };

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      relax(c, r, c - 1, r - 1, 4);
      relax(c, r, c, r - 1, 3);
      relax(c, r, c + 1, r - 1, 4);
      relax(c, r, c - 1, r, 3);
    }
  }
  for (int r = h - 1; r >= 0; --r) {
    for (int c = w - 1; c >= 0; --c) {
      relax(c, r, c + 1, r + 1, 4);
      relax(c, r, c, r + 1, 3);
      relax(c, r, c - 1, r + 1, 4);
      relax(c, r, c + 1, r, 3);
    }
  }
  return d;
}

DistanceField distance_transform(const OccupancyGrid& grid) {
  Raster<std::uint8_t> obstacle(grid.width(), grid.height());
  bool any = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool blocked = grid.at(i) != Cell::Free;
    obstacle[i] = blocked;
    any = any || blocked;
  }
  if (!any) throw Error(ErrorCode::UndefinedField, "grid has no Occupied or Unknown cell");

  const auto raw = chamfer_34(obstacle);
  DistanceField field{Raster<double>(grid.width(), grid.height()), grid.resolution()};
  const double scale = grid.resolution() / 3.0;
  for (std::size_t i = 0; i < raw.size(); ++i) field.meters[i] = raw[i] * scale;
  return field;
}

}  // namespace explore
