/*
 * C interface to the multiscale IoU library.
 *
 * Every fallible call returns a miou_status; MIOU_OK means the out-parameters
 * were written. On failure the out-parameters are left untouched and
 * miou_last_error() describes the problem (per thread, valid until the next
 * failing call on that thread).
 *
 * Masks are opaque, immutable handles released with miou_mask_destroy().
 * Strings returned through char** are heap allocated and released with
 * miou_string_free().
 *
 * Scale sets are passed as (const uint32_t* sizes, size_t count); a NULL
 * pointer with count 0 selects the default {1, 2, 4, ..., 512}.
 */
#ifndef MIOU_MIOU_H
#define MIOU_MIOU_H

#include <stddef.h>
#include <stdint.h>

#if defined(MIOU_BUILDING_LIBRARY)
#define MIOU_API __attribute__((visibility("default")))
#else
#define MIOU_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum miou_status {
  MIOU_OK = 0,
  MIOU_ERR_INVALID_ARGUMENT = 1,
  MIOU_ERR_UNREADABLE_FILE = 2,
  MIOU_ERR_MALFORMED_FORMAT = 3,
  MIOU_ERR_UNSUPPORTED_ENCODING = 4,
  MIOU_ERR_UNWRITABLE_DESTINATION = 5,
  MIOU_ERR_DIMENSION_MISMATCH = 6,
  MIOU_ERR_BOTH_EMPTY = 7,
  MIOU_ERR_EMPTY_GROUND_TRUTH = 8,
  MIOU_ERR_EMPTY_DETECTION = 9,
  MIOU_ERR_INVALID_CELL_SIZE = 10,
  MIOU_ERR_SCALE_SET_TOO_SMALL = 11,
  MIOU_ERR_EMPTY_MASK = 12,
  MIOU_ERR_DEGENERATE_REGRESSION = 13,
  MIOU_ERR_SHAPE_EXCEEDS_FRAME = 14,
  MIOU_ERR_INTERNAL = 99
} miou_status;

typedef enum miou_format {
  MIOU_FORMAT_AUTO = -1, /* by extension: .png, .json, else text grid */
  MIOU_FORMAT_PNG = 0,
  MIOU_FORMAT_TEXT_GRID = 1,
  MIOU_FORMAT_COCO_JSON = 2
} miou_format;

typedef enum miou_fractal_mode {
  MIOU_FRACTAL_CONTOUR = 0,
  MIOU_FRACTAL_AREA = 1
} miou_fractal_mode;

typedef enum miou_report_format {
  MIOU_REPORT_JSON = 0,
  MIOU_REPORT_CSV = 1 /* header line + one row */
} miou_report_format;

typedef struct miou_mask miou_mask;

MIOU_API const char* miou_status_name(miou_status status);
MIOU_API const char* miou_last_error(void);
/* Nonzero for statuses meaning "metric undefined for this input". */
MIOU_API int miou_status_is_metric_undefined(miou_status status);
MIOU_API void miou_string_free(char* text);

/* ---- masks --------------------------------------------------------------- */

/* `data` holds width*height bytes, row-major, nonzero = foreground. NULL
 * creates an empty mask. */
MIOU_API miou_status miou_mask_create(uint32_t width, uint32_t height,
                                      const uint8_t* data, miou_mask** out);
/* annotation_id is only read for MIOU_FORMAT_COCO_JSON (or AUTO on .json). */
MIOU_API miou_status miou_mask_load(const char* path, miou_format format,
                                    int64_t annotation_id, miou_mask** out);
MIOU_API miou_status miou_mask_save(const miou_mask* mask, const char* path,
                                    miou_format format);
MIOU_API void miou_mask_destroy(miou_mask* mask);

MIOU_API uint32_t miou_mask_width(const miou_mask* mask);
MIOU_API uint32_t miou_mask_height(const miou_mask* mask);
MIOU_API size_t miou_mask_pixel_count(const miou_mask* mask);
/* Copies width*height bytes of 0/1; `len` must equal that size. */
MIOU_API miou_status miou_mask_copy_data(const miou_mask* mask, uint8_t* out,
                                         size_t len);

/* ---- single metrics ------------------------------------------------------ */

MIOU_API miou_status miou_contour(const miou_mask* mask, miou_mask** out);
MIOU_API miou_status miou_downsample(const miou_mask* mask, uint32_t cell_size,
                                     miou_mask** out);

MIOU_API miou_status miou_iou(const miou_mask* gt, const miou_mask* dt,
                              double* out);
MIOU_API miou_status miou_precision_recall_f1(const miou_mask* gt,
                                              const miou_mask* dt,
                                              double* precision, double* recall,
                                              double* f1);
/* *saturation is +1 / -1 when dsc is 1 / 0 (ltd is then +/-infinity). */
MIOU_API miou_status miou_dsc_ltd(const miou_mask* gt, const miou_mask* dt,
                                  double* dsc, double* ltd, int* saturation);

MIOU_API miou_status miou_intersection_ratio(const miou_mask* gt,
                                             const miou_mask* dt,
                                             uint32_t cell_size, double* out);
/* `ratios`, when not NULL, receives one r value per scale (ascending cell
 * size). */
MIOU_API miou_status miou_compute(const miou_mask* gt, const miou_mask* dt,
                                  const uint32_t* scales, size_t scale_count,
                                  int use_contour, double* miou,
                                  double* ratios);
/* `counts`, when not NULL, receives one occupied-cell count per scale. */
MIOU_API miou_status miou_fractal_dimension(const miou_mask* mask,
                                            const uint32_t* scales,
                                            size_t scale_count,
                                            miou_fractal_mode mode,
                                            double* dimension,
                                            double* r_squared,
                                            uint64_t* counts);

/* ---- evaluation and experiments ------------------------------------------ */

MIOU_API miou_status miou_evaluate_pair(const miou_mask* gt,
                                        const miou_mask* dt,
                                        const uint32_t* scales,
                                        size_t scale_count, int use_contour,
                                        const char* pair_id,
                                        miou_report_format format,
                                        char** out_text);
/* Pairs files with the same name in both directories. `out_unmatched`, when
 * not NULL, receives the unpaired names, one per line. */
MIOU_API miou_status miou_evaluate_directories(
    const char* gt_dir, const char* dt_dir, const uint32_t* scales,
    size_t scale_count, int use_contour, unsigned threads, char** out_csv,
    char** out_unmatched);

/* Configs are JSON objects; see the README for the accepted keys. */
MIOU_API miou_status miou_run_grid_experiment(const char* config_json,
                                              char** out_csv);
MIOU_API miou_status miou_write_variant_grid(const char* config_json,
                                             const char* out_dir);
MIOU_API miou_status miou_run_distribution_experiment(const char* config_json,
                                                      char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* MIOU_MIOU_H */
