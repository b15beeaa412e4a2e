#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "miou/mask.hpp"
#include "miou/raster.hpp"

namespace miou::synth {

// Star polygon whose radius follows a triangle wave:
//   r(θ) = base_radius + tooth_amplitude * tri(tooth_count * θ + phase)
// with tri ranging over [0, 1]. The seed only moves the tooth phase.
struct JaggedShapeParams {
  Point center{128, 128};
  double base_radius = 70;
  double tooth_amplitude = 30;
  std::uint32_t tooth_count = 24;
  Frame frame{256, 256};
  std::uint64_t seed = 0;
};

// Throws InvalidArgument for tooth_count < 3 or negative radii and
// ShapeExceedsFrame when the outermost radius leaves the frame.
Mask generate_jagged(const JaggedShapeParams& params);

// Outline used by generate_jagged, exposed for tests.
std::vector<Point> jagged_outline(const JaggedShapeParams& params);

enum class PerturbationKind { Scale, Translate, Rotate, Smooth };

std::string_view to_string(PerturbationKind kind) noexcept;
PerturbationKind parse_perturbation_kind(std::string_view name);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::Translate;
  double factor = 1.0;   // scale
  std::int32_t dx = 0;   // translate
  std::int32_t dy = 0;
  double degrees = 0.0;  // rotate
  double sigma = 0.0;    // smooth
  double threshold = 0.5;
  // Seed of the draw that produced the magnitudes above, if any.
  std::uint64_t seed = 0;

  static PerturbationSpec scale(double factor);
  static PerturbationSpec translate(std::int32_t dx, std::int32_t dy);
  static PerturbationSpec identity() { return translate(0, 0); }
  static PerturbationSpec rotate(double degrees);
  static PerturbationSpec smooth(double sigma, double threshold = 0.5);

  // Compact text form: "scale:1.15", "translate:8:8", "rotate:-3.5",
  // "smooth:2:0.5", plus "identity".
  static PerturbationSpec parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const PerturbationSpec&,
                         const PerturbationSpec&) = default;
};

// Frame-preserving; pixels pushed out of the frame are dropped and an empty
// result is legal.
//   scale/rotate: nearest-neighbour resampling about the foreground centroid
//   translate:    integer shift, background fill
//   smooth:       Gaussian (radius ceil(3σ), zero padding) then value >= threshold
Mask apply_perturbation(const Mask& mask, const PerturbationSpec& spec);

// Applies specs left to right.
Mask apply_all(const Mask& mask, const std::vector<PerturbationSpec>& specs);

// Foreground centroid in continuous coordinates (pixel centers at +0.5).
// Returns the frame center for an empty mask.
Point centroid(const Mask& mask);

struct GridCell {
  std::size_t row = 0;
  std::size_t col = 0;
  std::vector<PerturbationSpec> specs;  // row transform, then smoothing
  Mask mask;
};

std::vector<PerturbationSpec> default_grid_rows();
std::vector<double> default_grid_sigmas();

// One cell per (row transform, smoothing level), row-major.
std::vector<GridCell> generate_variant_grid(
    const JaggedShapeParams& gt_params,
    const std::vector<PerturbationSpec>& rows = default_grid_rows(),
    const std::vector<double>& smoothing_levels = default_grid_sigmas(),
    double threshold = 0.5, unsigned threads = 0);

// Rectangle body with a row of square-wave teeth rising from its top edge.
// Teeth start at `left` and alternate tooth / gap of tooth_width pixels across
// body_width.
struct CombParams {
  Frame frame{256, 256};
  std::uint32_t left = 48;
  std::uint32_t top = 96;  // top row of the body; teeth sit above it
  std::uint32_t body_width = 160;
  std::uint32_t body_height = 80;
  std::uint32_t tooth_width = 8;
  std::uint32_t tooth_depth = 8;
};

Mask generate_comb(const CombParams& params);

// Axis-aligned bounding box of the foreground (empty mask -> empty mask).
Mask bounding_box(const Mask& mask);

// gt is a comb, dt1 its bounding box, dt2 a comb with the same teeth but a
// tooth depth found by exhaustive search so that IoU(gt, dt2) matches
// IoU(gt, dt1) within `tolerance`.
struct CombComparison {
  Mask gt;
  Mask box;
  Mask comb;
  std::uint32_t matched_depth = 0;
};
CombComparison comb_comparison(const CombParams& gt, double tolerance = 1e-9);

// Synthetic shape families standing in for dataset categories.
const std::vector<std::string>& synthetic_categories();

// Deterministic random member of a family, centred in `frame`.
Mask generate_category_sample(std::string_view category, Frame frame,
                              std::uint64_t seed);

// splitmix64 stream; the same seed gives the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() noexcept;
  // [0, 1)
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  // Inclusive integer range.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;

 private:
  std::uint64_t state_;
};

// Independent stream seed for item `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace miou::synth
