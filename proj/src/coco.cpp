#include "miou/coco.hpp"

#include <fstream>
#include <map>

#include "json.hpp"
#include "miou/raster.hpp"

namespace miou::coco {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedFormat,
                path.string() + ": invalid JSON: " + e.what());
  }
}

std::map<std::int64_t, Frame> image_frames(const json& doc) {
  std::map<std::int64_t, Frame> frames;
  if (!doc.contains("images") || !doc["images"].is_array()) {
    throw Error(ErrorCode::MalformedFormat, "COCO file has no images array");
  }
  for (const auto& img : doc["images"]) {
    frames[img.at("id").get<std::int64_t>()] =
        Frame{img.at("width").get<std::uint32_t>(),
              img.at("height").get<std::uint32_t>()};
  }
  return frames;
}

Mask decode_segmentation(const json& seg, Frame frame) {
  if (seg.is_array()) {
    std::vector<std::vector<double>> polys;
    for (const auto& p : seg) polys.push_back(p.get<std::vector<double>>());
    return rasterize_polygons(polys, frame);
  }
  if (seg.is_object() && seg.contains("counts")) {
    const auto& counts = seg["counts"];
    if (counts.is_string()) {
      throw Error(ErrorCode::UnsupportedEncoding,
                  "compressed RLE segmentations are not supported");
    }
    if (seg.contains("size")) {
      auto size = seg["size"].get<std::vector<std::uint32_t>>();
      if (size.size() != 2 || size[0] != frame.height ||
          size[1] != frame.width) {
        throw Error(ErrorCode::MalformedFormat,
                    "RLE size does not match the image frame");
      }
    }
    auto runs = counts.get<std::vector<std::uint64_t>>();
    return decode_rle(runs, frame);
  }
  throw Error(ErrorCode::MalformedFormat, "unrecognised segmentation layout");
}

Annotation decode_annotation(const json& ann,
                             const std::map<std::int64_t, Frame>& frames,
                             const std::map<std::int64_t, std::string>& names) {
  const auto image_id = ann.at("image_id").get<std::int64_t>();
  auto frame = frames.find(image_id);
  if (frame == frames.end()) {
    throw Error(ErrorCode::MalformedFormat,
                "annotation references unknown image " +
                    std::to_string(image_id));
  }
  Annotation out{.id = ann.at("id").get<std::int64_t>(),
                 .image_id = image_id,
                 .category_id = ann.value("category_id", std::int64_t{0}),
                 .category = {},
                 .mask = decode_segmentation(ann.at("segmentation"),
                                             frame->second)};
  if (auto it = names.find(out.category_id); it != names.end())
    out.category = it->second;
  return out;
}

// json::exception covers missing keys and type mismatches in otherwise valid
// JSON.
template <typename F>
auto guarded(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedFormat,
                path.string() + ": bad COCO layout: " + e.what());
  }
}

}  // namespace

Mask decode_rle(std::span<const std::uint64_t> counts, Frame frame) {
  Mask out(frame);
  const std::uint64_t area = frame.area();
  std::uint64_t pos = 0;
  bool fg = false;
  for (std::uint64_t run : counts) {
    if (run > area - pos) {
      throw Error(ErrorCode::MalformedFormat, "RLE runs exceed the frame");
    }
    if (fg) {
      for (std::uint64_t i = pos; i < pos + run; ++i) {
        // Column-major: index i walks down column i / height.
        out.set(static_cast<std::uint32_t>(i / frame.height),
                static_cast<std::uint32_t>(i % frame.height), true);
      }
    }
    pos += run;
    fg = !fg;
  }
  if (pos != area) {
    throw Error(ErrorCode::MalformedFormat,
                "RLE runs cover " + std::to_string(pos) + " of " +
                    std::to_string(area) + " pixels");
  }
  return out;
}

Mask rasterize_polygons(const std::vector<std::vector<double>>& polygons,
                        Frame frame) {
  Mask out(frame);
  std::vector<Point> pts;
  for (const auto& flat : polygons) {
    if (flat.size() % 2 != 0) {
      throw Error(ErrorCode::MalformedFormat,
                  "polygon has an odd number of coordinates");
    }
    pts.clear();
    for (std::size_t i = 0; i < flat.size(); i += 2)
      pts.push_back({flat[i], flat[i + 1]});
    // Each part is filled on its own and the parts are unioned.
    fill_polygon_into(pts, out);
  }
  return out;
}

Mask load_annotation(const std::filesystem::path& path,
                     std::int64_t annotation_id) {
  const json doc = parse_file(path);
  return guarded(path, [&] {
    const auto frames = image_frames(doc);
    for (const auto& ann : doc.at("annotations")) {
      if (ann.at("id").get<std::int64_t>() == annotation_id)
        return decode_annotation(ann, frames, {}).mask;
    }
    throw Error(ErrorCode::MalformedFormat,
                "annotation " + std::to_string(annotation_id) + " not found in " +
                    path.string());
  });
}

LoadResult load_all(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  return guarded(path, [&] {
    const auto frames = image_frames(doc);
    std::map<std::int64_t, std::string> names;
    if (doc.contains("categories")) {
      for (const auto& c : doc["categories"])
        names[c.at("id").get<std::int64_t>()] = c.at("name").get<std::string>();
    }
    LoadResult result;
    for (const auto& ann : doc.at("annotations")) {
      try {
        result.annotations.push_back(decode_annotation(ann, frames, names));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnsupportedEncoding) throw;
        ++result.skipped_compressed;
      }
    }
    return result;
  });
}

}  // namespace miou::coco
