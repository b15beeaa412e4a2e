#include "miou/multiscale.hpp"

#include <charconv>
#include <cmath>

#include "miou/contour.hpp"

namespace miou {

ScaleSet::ScaleSet(std::vector<std::uint32_t> cell_sizes)
    : sizes_(std::move(cell_sizes)) {
  if (sizes_.size() < 2) {
    throw Error(ErrorCode::ScaleSetTooSmall,
                "a scale set needs at least two cell sizes, got " +
                    std::to_string(sizes_.size()));
  }
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 1) {
      throw Error(ErrorCode::InvalidCellSize, "cell sizes must be >= 1");
    }
    if (i > 0 && sizes_[i] <= sizes_[i - 1]) {
      throw Error(ErrorCode::InvalidArgument,
                  "cell sizes must be strictly increasing: " + to_string());
    }
  }
}

ScaleSet ScaleSet::powers_of_two(unsigned first_exponent,
                                 unsigned last_exponent) {
  if (last_exponent > 31) {
    throw Error(ErrorCode::InvalidArgument, "exponent above 31");
  }
  std::vector<std::uint32_t> sizes;
  for (unsigned n = first_exponent; n <= last_exponent; ++n)
    sizes.push_back(std::uint32_t{1} << n);
  return ScaleSet(std::move(sizes));
}

ScaleSet ScaleSet::parse(std::string_view text) {
  std::vector<std::uint32_t> sizes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "bad cell size '" + std::string(tok) + "'");
    }
    if (value < 1 || value > UINT32_MAX) {
      throw Error(ErrorCode::InvalidCellSize,
                  "cell size out of range: " + std::string(tok));
    }
    sizes.push_back(static_cast<std::uint32_t>(value));
    pos = end + 1;
  }
  return ScaleSet(std::move(sizes));
}

std::string ScaleSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(sizes_[i]);
  }
  return out;
}

Mask downsample(const Mask& mask, std::uint32_t cell_size) {
  if (cell_size < 1) {
    throw Error(ErrorCode::InvalidCellSize, "cell size must be >= 1");
  }
  if (cell_size == 1) return mask;
  const std::uint32_t ow = (mask.width() + cell_size - 1) / cell_size;
  const std::uint32_t oh = (mask.height() + cell_size - 1) / cell_size;
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(ow) * oh, 0);
  const auto data = mask.data();
  for (std::uint32_t y = 0; y < mask.height(); ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * mask.width();
    std::uint8_t* out_row = cells.data() + static_cast<std::size_t>(y / cell_size) * ow;
    for (std::uint32_t x = 0; x < mask.width(); ++x)
      out_row[x / cell_size] |= data[row + x];
  }
  return Mask(Frame{ow, oh}, cells);
}

double intersection_ratio(const Mask& gt, const Mask& dt,
                          std::uint32_t cell_size) {
  require_same_frame(gt, dt);
  if (gt.empty()) {
    throw Error(ErrorCode::EmptyGroundTruth,
                "intersection ratio needs a nonempty ground truth");
  }
  const Mask coarse_gt = downsample(gt, cell_size);
  const Mask coarse_dt = downsample(dt, cell_size);
  return static_cast<double>(intersection_count(coarse_gt, coarse_dt)) /
         static_cast<double>(cell_count(coarse_gt));
}

double trapezoid(std::span<const CurvePoint> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::ScaleSetTooSmall, "trapezoid needs two points");
  }
  // Written as (half ends + interior) / intervals so a constant curve
  // integrates to exactly that constant.
  double sum = 0.5 * (points.front().ratio + points.back().ratio);
  for (std::size_t i = 1; i + 1 < points.size(); ++i) sum += points[i].ratio;
  return sum / static_cast<double>(points.size() - 1);
}

MiouResult miou(const Mask& gt, const Mask& dt, const ScaleSet& scales,
                bool use_contour) {
  require_same_frame(gt, dt);
  if (gt.empty()) {
    throw Error(ErrorCode::EmptyGroundTruth, "MIoU needs a nonempty ground truth");
  }
  const Mask gt_region = use_contour ? extract_contour(gt) : gt;
  const Mask dt_region = use_contour ? extract_contour(dt) : dt;

  MiouResult result;
  result.used_contour = use_contour;
  const std::size_t n = scales.size();
  const double spacing = 1.0 / static_cast<double>(n - 1);
  result.curve.points.reserve(n);
  result.curve.raw_scales.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i + 1 == n ? 1.0 : static_cast<double>(i) * spacing;
    result.curve.points.push_back(
        {x, intersection_ratio(gt_region, dt_region, scales[i])});
    result.curve.raw_scales.push_back(scales[i]);
  }
  result.miou = trapezoid(result.curve.points);
  return result;
}

FractalDimResult fractal_dimension(const Mask& mask, const ScaleSet& scales,
                                   FractalMode mode) {
  if (mask.empty()) {
    throw Error(ErrorCode::EmptyMask, "fractal dimension of an empty mask");
  }
  const Mask region = mode == FractalMode::Contour ? extract_contour(mask) : mask;

  FractalDimResult result;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::uint32_t delta : scales.cell_sizes()) {
    const std::size_t n = cell_count(downsample(region, delta));
    result.samples.push_back({delta, n});
    if (n == 0) continue;
    xs.push_back(-std::log(static_cast<double>(delta)));
    ys.push_back(std::log(static_cast<double>(n)));
  }

  const double m = static_cast<double>(xs.size());
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0;
  double sxy = 0;
  double syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (xs.size() < 2 || syy == 0) {
    throw Error(ErrorCode::DegenerateRegression,
                "every scale sees the same cell count");
  }
  result.dimension = sxy / sxx;
  result.r_squared = (sxy * sxy) / (sxx * syy);
  return result;
}

}  // namespace miou
