#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "miou/error.hpp"

namespace miou {

struct Frame {
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  std::size_t area() const noexcept {
    return static_cast<std::size_t>(width) * height;
  }
  friend bool operator==(const Frame&, const Frame&) = default;
};

// Binary raster, row-major, every cell exactly 0 or 1. The frame is fixed at
// construction; the only way to obtain a different frame is to build a new
// mask.
class Mask {
 public:
  // All-background mask.
  explicit Mask(Frame frame);
  Mask(std::uint32_t width, std::uint32_t height)
      : Mask(Frame{width, height}) {}

  // Any nonzero byte becomes foreground. Throws InvalidArgument when the
  // data length does not match the frame.
  Mask(Frame frame, std::span<const std::uint8_t> data);

  const Frame& frame() const noexcept { return frame_; }
  std::uint32_t width() const noexcept { return frame_.width; }
  std::uint32_t height() const noexcept { return frame_.height; }

  bool at(std::uint32_t x, std::uint32_t y) const noexcept {
    return grid_[static_cast<std::size_t>(y) * frame_.width + x] != 0;
  }
  // Out-of-frame coordinates read as background.
  bool at_or_background(std::int64_t x, std::int64_t y) const noexcept {
    if (x < 0 || y < 0 || x >= frame_.width || y >= frame_.height) return false;
    return at(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
  }
  void set(std::uint32_t x, std::uint32_t y, bool value) noexcept {
    grid_[static_cast<std::size_t>(y) * frame_.width + x] = value ? 1 : 0;
  }

  std::span<const std::uint8_t> data() const noexcept { return grid_; }

  std::size_t pixel_count() const noexcept;
  bool empty() const noexcept { return pixel_count() == 0; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  Frame frame_;
  std::vector<std::uint8_t> grid_;
};

inline std::size_t pixel_count(const Mask& mask) noexcept {
  return mask.pixel_count();
}

Mask complement(const Mask& mask);

// Cellwise AND / OR. Both throw DimensionMismatch on differing frames.
Mask intersect(const Mask& a, const Mask& b);
Mask unite(const Mask& a, const Mask& b);

std::size_t intersection_count(const Mask& a, const Mask& b);

// Throws DimensionMismatch unless both masks share a frame.
void require_same_frame(const Mask& a, const Mask& b);

// Copies `mask` into a larger (or equal) frame with its top-left pixel placed
// at (offset_x, offset_y). Throws InvalidArgument if it does not fit.
Mask pad(const Mask& mask, Frame frame, std::uint32_t offset_x,
         std::uint32_t offset_y);

enum class MaskFormat { Png, TextGrid, CocoJson };

// `annotation_id` is only consulted for MaskFormat::CocoJson.
Mask load_mask(const std::filesystem::path& path, MaskFormat format,
               std::int64_t annotation_id = -1);

// CocoJson is not a valid save format (InvalidArgument).
void save_mask(const Mask& mask, const std::filesystem::path& path,
               MaskFormat format);

// Picks a format from the extension: .png -> Png, .json -> CocoJson, anything
// else -> TextGrid.
MaskFormat format_from_extension(const std::filesystem::path& path);

// Text-grid codec on in-memory strings.
Mask parse_text_grid(std::string_view text);
std::string to_text_grid(const Mask& mask);

}  // namespace miou
