#pragma once

#include <span>

#include "miou/mask.hpp"

namespace miou {

struct Point {
  double x = 0;
  double y = 0;
};

// Even-odd scanline fill of a closed polygon (the last vertex connects back to
// the first). Pixel (x, y) is foreground iff its center (x + 0.5, y + 0.5)
// lies inside. Parts of the polygon outside the frame are clipped.
Mask fill_polygon(std::span<const Point> vertices, Frame frame);

// Same rule, OR-ing the result into `target`.
void fill_polygon_into(std::span<const Point> vertices, Mask& target);

}  // namespace miou
