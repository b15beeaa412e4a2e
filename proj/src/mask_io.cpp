#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "miou/coco.hpp"
#include "miou/mask.hpp"

namespace miou {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports read failures by longjmp-ing back into this function.
Mask read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  }
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw Error(ErrorCode::MalformedFormat, path.string() + " is not a PNG");
  }

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::MalformedFormat, "libpng initialisation failed");
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::MalformedFormat, "corrupt PNG: " + path.string());
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  // Expand palettes and sub-byte gray to 8 bit; 16-bit samples are kept so
  // that a value of 1/65535 still counts as foreground.
  png_read_png(png, info, PNG_TRANSFORM_EXPAND, nullptr);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  const int channels = png_get_channels(png, info);
  const bool has_alpha = (color_type & PNG_COLOR_MASK_ALPHA) != 0;
  const int color_channels = has_alpha ? channels - 1 : channels;
  const int bytes_per_sample = bit_depth == 16 ? 2 : 1;
  png_bytepp rows = png_get_rows(png, info);

  std::vector<std::uint8_t> grid(static_cast<std::size_t>(width) * height, 0);
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_bytep row = rows[y];
    for (png_uint_32 x = 0; x < width; ++x) {
      const png_bytep px =
          row + static_cast<std::size_t>(x) * channels * bytes_per_sample;
      bool on = false;
      for (int c = 0; c < color_channels * bytes_per_sample && !on; ++c)
        on = px[c] != 0;
      grid[static_cast<std::size_t>(y) * width + x] = on;
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return Mask(Frame{width, height}, grid);
}

void write_png(const Mask& mask, const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = mask.width();
  image.height = mask.height();
  image.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> pixels(mask.data().begin(), mask.data().end());
  for (auto& v : pixels) v = v ? 255 : 0;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0,
                               nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::UnwritableDestination,
                "cannot write " + path.string() + ": " + msg);
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::UnreadableFile, "read failed: " + path.string());
  }
  return ss.str();
}

}  // namespace

Mask parse_text_grid(std::string_view text) {
  std::vector<std::uint8_t> grid;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (line.empty()) {
      // Only tolerated as the final terminator.
      if (pos < text.size()) {
        throw Error(ErrorCode::MalformedFormat, "text grid has an empty row");
      }
      break;
    }
    if (height == 0) {
      width = static_cast<std::uint32_t>(line.size());
    } else if (line.size() != width) {
      throw Error(ErrorCode::MalformedFormat,
                  "text grid row " + std::to_string(height) + " has length " +
                      std::to_string(line.size()) + ", expected " +
                      std::to_string(width));
    }
    for (char c : line) {
      if (c != '0' && c != '1') {
        throw Error(ErrorCode::MalformedFormat,
                    std::string("text grid contains '") + c + "'");
      }
      grid.push_back(c == '1');
    }
    ++height;
  }
  if (height == 0) {
    throw Error(ErrorCode::MalformedFormat, "text grid is empty");
  }
  return Mask(Frame{width, height}, grid);
}

std::string to_text_grid(const Mask& mask) {
  std::string out;
  out.reserve(mask.frame().area() + mask.height());
  for (std::uint32_t y = 0; y < mask.height(); ++y) {
    for (std::uint32_t x = 0; x < mask.width(); ++x)
      out.push_back(mask.at(x, y) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

MaskFormat format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return MaskFormat::Png;
  if (ext == ".json") return MaskFormat::CocoJson;
  return MaskFormat::TextGrid;
}

Mask load_mask(const std::filesystem::path& path, MaskFormat format,
               std::int64_t annotation_id) {
  switch (format) {
    case MaskFormat::Png:
      return read_png(path);
    case MaskFormat::TextGrid:
      return parse_text_grid(slurp(path));
    case MaskFormat::CocoJson:
      return coco::load_annotation(path, annotation_id);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mask format");
}

void save_mask(const Mask& mask, const std::filesystem::path& path,
               MaskFormat format) {
  switch (format) {
    case MaskFormat::Png:
      write_png(mask, path);
      return;
    case MaskFormat::TextGrid: {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw Error(ErrorCode::UnwritableDestination,
                    "cannot open " + path.string() + " for writing");
      }
      out << to_text_grid(mask);
      out.flush();
      if (!out) {
        throw Error(ErrorCode::UnwritableDestination,
                    "write failed: " + path.string());
      }
      return;
    }
    case MaskFormat::CocoJson:
      throw Error(ErrorCode::InvalidArgument,
                  "masks cannot be saved as COCO JSON");
  }
}

}  // namespace miou
