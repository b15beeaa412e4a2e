#include "miou/raster.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace miou {

void fill_polygon_into(std::span<const Point> vertices, Mask& target) {
  const std::size_t n = vertices.size();
  if (n < 3) return;

  double min_y = vertices[0].y;
  double max_y = vertices[0].y;
  for (const auto& v : vertices) {
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const auto h = static_cast<std::int64_t>(target.height());
  const auto w = static_cast<std::int64_t>(target.width());
  const std::int64_t y_begin =
      std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(min_y)));
  const std::int64_t y_end =
      std::min<std::int64_t>(h, static_cast<std::int64_t>(std::ceil(max_y)) + 1);

  std::vector<double> crossings;
  for (std::int64_t y = y_begin; y < y_end; ++y) {
    const double yc = static_cast<double>(y) + 0.5;
    crossings.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = vertices[i];
      const Point& b = vertices[(i + 1) % n];
      // Half-open rule so a vertex lying exactly on the scanline is counted
      // once.
      if ((a.y <= yc) != (b.y <= yc)) {
        crossings.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
      // Pixel x is inside iff crossings[i] <= x + 0.5 < crossings[i + 1].
      std::int64_t x0 =
          static_cast<std::int64_t>(std::ceil(crossings[i] - 0.5));
      std::int64_t x1 =
          static_cast<std::int64_t>(std::ceil(crossings[i + 1] - 0.5));
      x0 = std::clamp<std::int64_t>(x0, 0, w);
      x1 = std::clamp<std::int64_t>(x1, 0, w);
      for (std::int64_t x = x0; x < x1; ++x)
        target.set(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                   true);
    }
  }
}

Mask fill_polygon(std::span<const Point> vertices, Frame frame) {
  Mask out(frame);
  fill_polygon_into(vertices, out);
  return out;
}

}  // namespace miou
