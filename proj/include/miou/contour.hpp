#pragma once

#include "miou/mask.hpp"

namespace miou {

// Inner boundary: a foreground pixel is kept iff at least one of its four
// edge neighbours is background or lies outside the frame. Holes contribute
// their own boundary, as does every connected component.
Mask extract_contour(const Mask& mask);

}  // namespace miou
