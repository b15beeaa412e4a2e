#include "miou/contour.hpp"

namespace miou {

Mask extract_contour(const Mask& mask) {
  Mask out(mask.frame());
  const auto w = static_cast<std::int64_t>(mask.width());
  const auto h = static_cast<std::int64_t>(mask.height());
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      if (!mask.at_or_background(x, y)) continue;
      const bool interior =
          mask.at_or_background(x - 1, y) && mask.at_or_background(x + 1, y) &&
          mask.at_or_background(x, y - 1) && mask.at_or_background(x, y + 1);
      if (!interior)
        out.set(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                true);
    }
  }
  return out;
}

}  // namespace miou
