#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "miou/baseline.hpp"
#include "miou/multiscale.hpp"
#include "miou/synth.hpp"

namespace miou::harness {

// A metric value or the reason it could not be computed.
struct MetricValue {
  double value = 0;
  std::optional<ErrorCode> error;

  bool ok() const noexcept { return !error; }
};

struct MetricReport {
  std::string pair_id;
  MetricValue iou;
  MetricValue precision;
  MetricValue recall;
  MetricValue f1;
  MetricValue dsc;
  MetricValue ltd;
  Saturation ltd_saturation = Saturation::None;
  MetricValue miou;
  RatioCurve ratio_curve;
  MetricValue fractal_dim_gt;
  MetricValue fractal_dim_dt;
  bool used_contour = true;
  ScaleSet scale_set = ScaleSet::default_set();
  // Set when the pair as a whole could not be evaluated (frame mismatch);
  // every metric then carries the same error.
  std::optional<ErrorCode> pair_error;
};

// Baselines are always computed on areas; MIoU and the fractal dimensions on
// contours iff use_contour. Undefined metrics are flagged, never thrown.
// Throws DimensionMismatch.
MetricReport evaluate_pair(const Mask& gt, const Mask& dt,
                           const ScaleSet& scales = ScaleSet::default_set(),
                           bool use_contour = true,
                           std::string pair_id = {});

struct PairInput {
  std::string pair_id;
  Mask gt;
  Mask dt;
};

// Evaluates on a worker pool. Pairs with mismatched frames get pair_error set
// instead of aborting the batch. Output is sorted by pair_id.
std::vector<MetricReport> evaluate_batch(const std::vector<PairInput>& pairs,
                                         const ScaleSet& scales,
                                         bool use_contour, unsigned threads = 0);

// Loads files with the same name from both directories (PNG or text grid,
// chosen by extension). Names present in only one directory are returned in
// `unmatched`.
struct DirectoryPairs {
  std::vector<PairInput> pairs;
  std::vector<std::string> unmatched;
};
DirectoryPairs load_directory_pairs(const std::filesystem::path& gt_dir,
                                    const std::filesystem::path& dt_dir);

// Column order is fixed:
//   pair_id,iou,precision,recall,f1,dsc,ltd,miou,fractal_dim_gt,
//   fractal_dim_dt,used_contour,scales,ratio_curve,errors
// Undefined metrics are empty cells; `errors` lists metric=Code pairs
// separated by ';'. ltd prints inf / -inf when saturated.
std::string report_csv_header();
std::string report_csv_row(const MetricReport& report);
std::string reports_to_csv(const std::vector<MetricReport>& reports);
std::string report_to_json(const MetricReport& report);

// ---- variant grid ----------------------------------------------------------

struct GridConfig {
  synth::JaggedShapeParams shape;
  std::vector<synth::PerturbationSpec> rows = synth::default_grid_rows();
  std::vector<double> sigmas = synth::default_grid_sigmas();
  double threshold = 0.5;
  ScaleSet scales = ScaleSet::default_set();
  bool use_contour = true;
  unsigned threads = 0;
};

// Keys (all optional): seed, width, height, center_x, center_y, base_radius,
// tooth_amplitude, tooth_count, rows (array of spec strings such as
// "translate:8:8"), sigmas, threshold, scales, use_contour, threads.
GridConfig parse_grid_config(std::string_view json_text);

struct GridRow {
  std::size_t row = 0;
  std::size_t col = 0;
  MetricReport report;
};

std::vector<GridRow> run_grid_experiment(const GridConfig& config);

// Columns: row,col,iou,precision,recall,f1,dsc,miou
std::string grid_to_csv(const std::vector<GridRow>& rows);

// Writes gt.png, one r<row>_c<col>.png per cell and manifest.json
// ([{row, col, spec: [...], file}, ...]).
void write_grid(const std::filesystem::path& out_dir, const GridConfig& config);

// ---- perturbed-mask distributions ------------------------------------------

enum class Group { Rigid, Smooth };
std::string_view to_string(Group group) noexcept;
Group parse_group(std::string_view name);

struct CategorizedMask {
  std::string category;
  Mask mask;
};

struct PerturbationRanges {
  double max_rotation_deg = 10;   // rigid: uniform in [-max, +max]
  std::int32_t max_translation_px = 10;  // rigid: integer uniform per axis
  double sigma_min = 1;           // smooth: uniform in [sigma_min, sigma_max]
  double sigma_max = 3;
  double threshold = 0.5;
};

struct DistributionSummary {
  Group group = Group::Rigid;
  std::string category;
  std::string metric;  // "iou" or "miou"
  double median = 0;
  double q1 = 0;
  double q3 = 0;
  double min = 0;
  double max = 0;
  std::size_t n = 0;
};

// Quartiles use linear interpolation between order statistics. Throws
// InvalidArgument on an empty sample.
DistributionSummary summarize(std::vector<double> values);

// Perturbs every mask once (seeded per mask), scores the pair with IoU and
// MIoU and summarises per category, categories in first-seen order, iou
// before miou. Empty input masks are skipped; annihilated detections score 0.
std::vector<DistributionSummary> run_distribution_experiment(
    const std::vector<CategorizedMask>& masks, Group group,
    const ScaleSet& scales, std::uint64_t seed,
    const PerturbationRanges& ranges = {}, bool use_contour = true,
    unsigned threads = 0);

struct DistributionConfig {
  std::vector<Group> groups{Group::Rigid, Group::Smooth};
  std::uint64_t seed = 0;
  ScaleSet scales = ScaleSet::default_set();
  bool use_contour = true;
  unsigned threads = 0;
  PerturbationRanges ranges;
  // Synthetic fallback.
  std::size_t masks_per_category = 100;
  std::vector<std::string> categories = synth::synthetic_categories();
  Frame frame{200, 200};
  // User-supplied COCO annotations replace the synthetic masks when set.
  std::optional<std::filesystem::path> coco_annotations;
  std::vector<std::string> coco_categories;  // empty = all
};

// Keys (all optional): groups (["rigid","smooth"]), seed, scales,
// use_contour, threads, max_rotation_deg, max_translation_px, sigma_min,
// sigma_max, threshold, masks_per_category, categories, width, height,
// coco_annotations, coco_categories.
DistributionConfig parse_distribution_config(std::string_view json_text);

// Synthetic masks or COCO annotations, capped at masks_per_category each.
std::vector<CategorizedMask> collect_masks(const DistributionConfig& config);

std::vector<DistributionSummary> run_distribution_config(
    const DistributionConfig& config);

// Columns: group,category,metric,n,min,q1,median,q3,max
std::string summaries_to_csv(const std::vector<DistributionSummary>& rows);

}  // namespace miou::harness
