#include "miou/mask.hpp"

#include <algorithm>
#include <string>

namespace miou {

namespace {

void require_valid_frame(Frame frame) {
  if (frame.width < 1 || frame.height < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "mask frame must be at least 1x1, got " +
                    std::to_string(frame.width) + "x" +
                    std::to_string(frame.height));
  }
}

std::string frame_str(Frame f) {
  return std::to_string(f.width) + "x" + std::to_string(f.height);
}

}  // namespace

Mask::Mask(Frame frame) : frame_(frame) {
  require_valid_frame(frame);
  grid_.assign(frame.area(), 0);
}

Mask::Mask(Frame frame, std::span<const std::uint8_t> data) : frame_(frame) {
  require_valid_frame(frame);
  if (data.size() != frame.area()) {
    throw Error(ErrorCode::InvalidArgument,
                "mask data holds " + std::to_string(data.size()) +
                    " cells, frame " + frame_str(frame) + " needs " +
                    std::to_string(frame.area()));
  }
  grid_.resize(data.size());
  std::transform(data.begin(), data.end(), grid_.begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v != 0; });
}

std::size_t Mask::pixel_count() const noexcept {
  return static_cast<std::size_t>(std::count(grid_.begin(), grid_.end(), 1));
}

void require_same_frame(const Mask& a, const Mask& b) {
  if (a.frame() != b.frame()) {
    throw Error(ErrorCode::DimensionMismatch,
                "frames differ: " + frame_str(a.frame()) + " vs " +
                    frame_str(b.frame()));
  }
}

Mask complement(const Mask& mask) {
  std::vector<std::uint8_t> out(mask.data().begin(), mask.data().end());
  for (auto& v : out) v = !v;
  return Mask(mask.frame(), out);
}

Mask intersect(const Mask& a, const Mask& b) {
  require_same_frame(a, b);
  std::vector<std::uint8_t> out(a.data().size());
  std::transform(a.data().begin(), a.data().end(), b.data().begin(),
                 out.begin(), [](auto x, auto y) { return x & y; });
  return Mask(a.frame(), out);
}

Mask unite(const Mask& a, const Mask& b) {
  require_same_frame(a, b);
  std::vector<std::uint8_t> out(a.data().size());
  std::transform(a.data().begin(), a.data().end(), b.data().begin(),
                 out.begin(), [](auto x, auto y) { return x | y; });
  return Mask(a.frame(), out);
}

std::size_t intersection_count(const Mask& a, const Mask& b) {
  require_same_frame(a, b);
  std::size_t n = 0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) n += da[i] & db[i];
  return n;
}

Mask pad(const Mask& mask, Frame frame, std::uint32_t offset_x,
         std::uint32_t offset_y) {
  if (static_cast<std::uint64_t>(offset_x) + mask.width() > frame.width ||
      static_cast<std::uint64_t>(offset_y) + mask.height() > frame.height) {
    throw Error(ErrorCode::InvalidArgument,
                "mask " + frame_str(mask.frame()) + " at offset (" +
                    std::to_string(offset_x) + "," + std::to_string(offset_y) +
                    ") does not fit in " + frame_str(frame));
  }
  Mask out(frame);
  for (std::uint32_t y = 0; y < mask.height(); ++y)
    for (std::uint32_t x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) out.set(x + offset_x, y + offset_y, true);
  return out;
}

}  // namespace miou
