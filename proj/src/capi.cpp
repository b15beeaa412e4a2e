#include "miou/miou.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "miou/baseline.hpp"
#include "miou/contour.hpp"
#include "miou/harness.hpp"
#include "miou/multiscale.hpp"

struct miou_mask {
  miou::Mask mask;
};

namespace {

thread_local std::string g_last_error;

miou_status fail(miou_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
miou_status guarded(F&& body) {
  try {
    body();
    return MIOU_OK;
  } catch (const miou::Error& e) {
    return fail(static_cast<miou_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MIOU_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MIOU_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw miou::Error(miou::ErrorCode::InvalidArgument, what);
}

miou::ScaleSet scales_from(const uint32_t* sizes, size_t count) {
  if (sizes == nullptr) {
    require(count == 0, "scale count given without scale array");
    return miou::ScaleSet::default_set();
  }
  return miou::ScaleSet(std::vector<std::uint32_t>(sizes, sizes + count));
}

std::optional<miou::MaskFormat> to_format(miou_format f) {
  switch (f) {
    case MIOU_FORMAT_PNG: return miou::MaskFormat::Png;
    case MIOU_FORMAT_TEXT_GRID: return miou::MaskFormat::TextGrid;
    case MIOU_FORMAT_COCO_JSON: return miou::MaskFormat::CocoJson;
    case MIOU_FORMAT_AUTO: return std::nullopt;
  }
  throw miou::Error(miou::ErrorCode::InvalidArgument, "unknown mask format");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

miou_mask* wrap(miou::Mask m) { return new miou_mask{std::move(m)}; }

}  // namespace

extern "C" {

MIOU_API const char* miou_status_name(miou_status status) {
  if (status == MIOU_OK) return "Ok";
  if (status == MIOU_ERR_INTERNAL) return "Internal";
  if (status < MIOU_ERR_INVALID_ARGUMENT || status > MIOU_ERR_SHAPE_EXCEEDS_FRAME)
    return "Unknown";
  // to_string returns views of string literals, so data() is terminated.
  return miou::to_string(static_cast<miou::ErrorCode>(status)).data();
}

MIOU_API const char* miou_last_error(void) { return g_last_error.c_str(); }

MIOU_API int miou_status_is_metric_undefined(miou_status status) {
  if (status < MIOU_ERR_INVALID_ARGUMENT || status > MIOU_ERR_SHAPE_EXCEEDS_FRAME)
    return 0;
  return miou::is_metric_undefined(static_cast<miou::ErrorCode>(status)) ? 1 : 0;
}

MIOU_API void miou_string_free(char* text) { std::free(text); }

MIOU_API miou_status miou_mask_create(uint32_t width, uint32_t height,
                                      const uint8_t* data, miou_mask** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    const miou::Frame frame{width, height};
    if (data == nullptr) {
      *out = wrap(miou::Mask(frame));
    } else {
      *out = wrap(miou::Mask(frame, std::span(data, frame.area())));
    }
  });
}

MIOU_API miou_status miou_mask_load(const char* path, miou_format format,
                                    int64_t annotation_id, miou_mask** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path or out is NULL");
    const auto fmt = to_format(format).value_or(miou::format_from_extension(path));
    *out = wrap(miou::load_mask(path, fmt, annotation_id));
  });
}

MIOU_API miou_status miou_mask_save(const miou_mask* mask, const char* path,
                                    miou_format format) {
  return guarded([&] {
    require(mask != nullptr && path != nullptr, "mask or path is NULL");
    const auto fmt = to_format(format).value_or(miou::format_from_extension(path));
    miou::save_mask(mask->mask, path, fmt);
  });
}

MIOU_API void miou_mask_destroy(miou_mask* mask) { delete mask; }

MIOU_API uint32_t miou_mask_width(const miou_mask* mask) {
  return mask ? mask->mask.width() : 0;
}

MIOU_API uint32_t miou_mask_height(const miou_mask* mask) {
  return mask ? mask->mask.height() : 0;
}

MIOU_API size_t miou_mask_pixel_count(const miou_mask* mask) {
  return mask ? mask->mask.pixel_count() : 0;
}

MIOU_API miou_status miou_mask_copy_data(const miou_mask* mask, uint8_t* out,
                                         size_t len) {
  return guarded([&] {
    require(mask != nullptr && out != nullptr, "mask or out is NULL");
    const auto data = mask->mask.data();
    require(len == data.size(), "buffer length does not match the frame");
    std::memcpy(out, data.data(), data.size());
  });
}

MIOU_API miou_status miou_contour(const miou_mask* mask, miou_mask** out) {
  return guarded([&] {
    require(mask != nullptr && out != nullptr, "mask or out is NULL");
    *out = wrap(miou::extract_contour(mask->mask));
  });
}

MIOU_API miou_status miou_downsample(const miou_mask* mask, uint32_t cell_size,
                                     miou_mask** out) {
  return guarded([&] {
    require(mask != nullptr && out != nullptr, "mask or out is NULL");
    *out = wrap(miou::downsample(mask->mask, cell_size));
  });
}

MIOU_API miou_status miou_iou(const miou_mask* gt, const miou_mask* dt,
                              double* out) {
  return guarded([&] {
    require(gt && dt && out, "NULL argument");
    *out = miou::iou(gt->mask, dt->mask);
  });
}

MIOU_API miou_status miou_precision_recall_f1(const miou_mask* gt,
                                              const miou_mask* dt,
                                              double* precision, double* recall,
                                              double* f1) {
  return guarded([&] {
    require(gt && dt && precision && recall && f1, "NULL argument");
    const auto pr = miou::precision_recall_f1(gt->mask, dt->mask);
    *precision = pr.precision;
    *recall = pr.recall;
    *f1 = pr.f1;
  });
}

MIOU_API miou_status miou_dsc_ltd(const miou_mask* gt, const miou_mask* dt,
                                  double* dsc, double* ltd, int* saturation) {
  return guarded([&] {
    require(gt && dt && dsc && ltd && saturation, "NULL argument");
    const auto d = miou::dsc_ltd(gt->mask, dt->mask);
    *dsc = d.dsc;
    *ltd = d.ltd;
    *saturation = static_cast<int>(d.saturation);
  });
}

MIOU_API miou_status miou_intersection_ratio(const miou_mask* gt,
                                             const miou_mask* dt,
                                             uint32_t cell_size, double* out) {
  return guarded([&] {
    require(gt && dt && out, "NULL argument");
    *out = miou::intersection_ratio(gt->mask, dt->mask, cell_size);
  });
}

MIOU_API miou_status miou_compute(const miou_mask* gt, const miou_mask* dt,
                                  const uint32_t* scales, size_t scale_count,
                                  int use_contour, double* miou_out,
                                  double* ratios) {
  return guarded([&] {
    require(gt && dt && miou_out, "NULL argument");
    const auto result = miou::miou(gt->mask, dt->mask,
                                   scales_from(scales, scale_count),
                                   use_contour != 0);
    *miou_out = result.miou;
    if (ratios) {
      for (std::size_t i = 0; i < result.curve.points.size(); ++i)
        ratios[i] = result.curve.points[i].ratio;
    }
  });
}

MIOU_API miou_status miou_fractal_dimension(const miou_mask* mask,
                                            const uint32_t* scales,
                                            size_t scale_count,
                                            miou_fractal_mode mode,
                                            double* dimension,
                                            double* r_squared,
                                            uint64_t* counts) {
  return guarded([&] {
    require(mask && dimension, "NULL argument");
    require(mode == MIOU_FRACTAL_CONTOUR || mode == MIOU_FRACTAL_AREA,
            "unknown fractal mode");
    const auto result = miou::fractal_dimension(
        mask->mask, scales_from(scales, scale_count),
        mode == MIOU_FRACTAL_AREA ? miou::FractalMode::Area
                                  : miou::FractalMode::Contour);
    *dimension = result.dimension;
    if (r_squared) *r_squared = result.r_squared;
    if (counts) {
      for (std::size_t i = 0; i < result.samples.size(); ++i)
        counts[i] = result.samples[i].count;
    }
  });
}

MIOU_API miou_status miou_evaluate_pair(const miou_mask* gt,
                                        const miou_mask* dt,
                                        const uint32_t* scales,
                                        size_t scale_count, int use_contour,
                                        const char* pair_id,
                                        miou_report_format format,
                                        char** out_text) {
  return guarded([&] {
    require(gt && dt && out_text, "NULL argument");
    require(format == MIOU_REPORT_JSON || format == MIOU_REPORT_CSV,
            "unknown report format");
    const auto report = miou::harness::evaluate_pair(
        gt->mask, dt->mask, scales_from(scales, scale_count), use_contour != 0,
        pair_id ? pair_id : "");
    *out_text = dup_string(format == MIOU_REPORT_JSON
                               ? miou::harness::report_to_json(report) + "\n"
                               : miou::harness::reports_to_csv({report}));
  });
}

MIOU_API miou_status miou_evaluate_directories(
    const char* gt_dir, const char* dt_dir, const uint32_t* scales,
    size_t scale_count, int use_contour, unsigned threads, char** out_csv,
    char** out_unmatched) {
  return guarded([&] {
    require(gt_dir && dt_dir && out_csv, "NULL argument");
    const auto scale_set = scales_from(scales, scale_count);
    const auto loaded = miou::harness::load_directory_pairs(gt_dir, dt_dir);
    const auto reports = miou::harness::evaluate_batch(loaded.pairs, scale_set,
                                                       use_contour != 0, threads);
    std::string unmatched;
    for (const auto& name : loaded.unmatched) unmatched += name + "\n";
    char* csv = dup_string(miou::harness::reports_to_csv(reports));
    if (out_unmatched) {
      try {
        *out_unmatched = dup_string(unmatched);
      } catch (...) {
        std::free(csv);
        throw;
      }
    }
    *out_csv = csv;
  });
}

MIOU_API miou_status miou_run_grid_experiment(const char* config_json,
                                              char** out_csv) {
  return guarded([&] {
    require(config_json && out_csv, "NULL argument");
    const auto config = miou::harness::parse_grid_config(config_json);
    *out_csv = dup_string(
        miou::harness::grid_to_csv(miou::harness::run_grid_experiment(config)));
  });
}

MIOU_API miou_status miou_write_variant_grid(const char* config_json,
                                             const char* out_dir) {
  return guarded([&] {
    require(config_json && out_dir, "NULL argument");
    miou::harness::write_grid(out_dir,
                              miou::harness::parse_grid_config(config_json));
  });
}

MIOU_API miou_status miou_run_distribution_experiment(const char* config_json,
                                                      char** out_csv) {
  return guarded([&] {
    require(config_json && out_csv, "NULL argument");
    const auto config = miou::harness::parse_distribution_config(config_json);
    *out_csv = dup_string(miou::harness::summaries_to_csv(
        miou::harness::run_distribution_config(config)));
  });
}

}  // extern "C"
