#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "miou/mask.hpp"

namespace miou::coco {

struct Annotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  std::string category;  // empty when the file has no matching category
  Mask mask;
};

struct LoadResult {
  std::vector<Annotation> annotations;
  // Annotations carrying compressed (string) RLE counts.
  std::size_t skipped_compressed = 0;
};

// Uncompressed COCO RLE: alternating background/foreground run lengths,
// starting with background, laid out column-major.
Mask decode_rle(std::span<const std::uint64_t> counts, Frame frame);

// Even-odd fill of one or more flat [x0,y0,x1,y1,...] polygons; a pixel is
// foreground iff its center lies inside.
Mask rasterize_polygons(const std::vector<std::vector<double>>& polygons,
                        Frame frame);

// Single annotation by id. Throws UnsupportedEncoding for compressed RLE and
// MalformedFormat for missing ids or broken layout.
Mask load_annotation(const std::filesystem::path& path,
                     std::int64_t annotation_id);

// Every decodable annotation in file order.
LoadResult load_all(const std::filesystem::path& path);

}  // namespace miou::coco
