#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "miou/mask.hpp"

namespace miou {

// Ordered grid cell sizes, in pixels. Always strictly increasing, starting at
// 1 or more, with at least two entries.
class ScaleSet {
 public:
  // Throws ScaleSetTooSmall for fewer than two sizes, InvalidCellSize for a
  // size below 1 and InvalidArgument when not strictly increasing.
  explicit ScaleSet(std::vector<std::uint32_t> cell_sizes);
  ScaleSet(std::initializer_list<std::uint32_t> cell_sizes)
      : ScaleSet(std::vector<std::uint32_t>(cell_sizes)) {}

  // {2^n : first_exponent <= n <= last_exponent}.
  static ScaleSet powers_of_two(unsigned first_exponent = 0,
                                unsigned last_exponent = 9);
  // {1, 2, 4, ..., 512}.
  static ScaleSet default_set() { return powers_of_two(); }

  // Comma-separated list such as "1,2,4,8".
  static ScaleSet parse(std::string_view text);

  std::span<const std::uint32_t> cell_sizes() const noexcept { return sizes_; }
  std::size_t size() const noexcept { return sizes_.size(); }
  std::uint32_t operator[](std::size_t i) const noexcept { return sizes_[i]; }

  std::string to_string() const;

  friend bool operator==(const ScaleSet&, const ScaleSet&) = default;

 private:
  std::vector<std::uint32_t> sizes_;
};

struct CurvePoint {
  double normalized_scale = 0;  // i / (|Δ| - 1)
  double ratio = 0;
};

struct RatioCurve {
  std::vector<CurvePoint> points;          // ascending cell size
  std::vector<std::uint32_t> raw_scales;   // cell size behind each point
};

struct MiouResult {
  double miou = 0;
  RatioCurve curve;
  bool used_contour = true;
};

enum class FractalMode { Contour, Area };

struct FractalDimResult {
  double dimension = 0;
  struct Sample {
    std::uint32_t cell_size = 0;
    std::size_t count = 0;
  };
  std::vector<Sample> samples;
  double r_squared = 0;
};

// Coarsens `mask` onto a grid of cell_size x cell_size cells anchored at the
// top-left pixel. Output is ceil(w / cell_size) x ceil(h / cell_size); a cell
// is 1 iff it covers at least one foreground pixel, with cells on the right
// and bottom edges clipped to the frame. Throws InvalidCellSize if
// cell_size < 1.
Mask downsample(const Mask& mask, std::uint32_t cell_size);

// Occupied cells of an already downsampled mask.
inline std::size_t cell_count(const Mask& downsampled) noexcept {
  return downsampled.pixel_count();
}

// Shared occupied cells over ground-truth occupied cells at one scale. The
// denominator is the ground truth only, so this is a recall-like quantity and
// not symmetric in its arguments.
// Throws DimensionMismatch, EmptyGroundTruth, InvalidCellSize.
double intersection_ratio(const Mask& gt, const Mask& dt,
                          std::uint32_t cell_size);

// Trapezoidal area under r over uniformly spaced abscissae on [0, 1].
double trapezoid(std::span<const CurvePoint> points);

// Multiscale IoU. With use_contour both masks are reduced to their inner
// boundaries before any downsampling. An empty detection (or an empty
// detection contour) yields 0, not an error.
// Throws DimensionMismatch, EmptyGroundTruth.
MiouResult miou(const Mask& gt, const Mask& dt,
                const ScaleSet& scales = ScaleSet::default_set(),
                bool use_contour = true);

// Box-counting dimension: least-squares slope of log n(δ) against log(1/δ).
// Throws EmptyMask, DegenerateRegression (every count identical).
FractalDimResult fractal_dimension(const Mask& mask, const ScaleSet& scales,
                                   FractalMode mode = FractalMode::Contour);

}  // namespace miou
