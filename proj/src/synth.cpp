#include "miou/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "format.hpp"
#include "miou/baseline.hpp"
#include "parallel.hpp"

namespace miou::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint32_t kSamplesPerTooth = 16;

// 0 at phase 0, 1 at phase 0.5, period 1.
double triangle_wave(double phase) {
  const double p = phase - std::floor(phase);
  return 2.0 * std::min(p, 1.0 - p);
}

void validate(const JaggedShapeParams& p) {
  if (p.tooth_count < 3) {
    throw Error(ErrorCode::InvalidArgument, "tooth_count must be >= 3");
  }
  if (!(p.base_radius > 0) || p.tooth_amplitude < 0) {
    throw Error(ErrorCode::InvalidArgument,
                "base_radius must be positive and tooth_amplitude >= 0");
  }
  const double outer = p.base_radius + p.tooth_amplitude;
  if (p.center.x - outer < 0 || p.center.y - outer < 0 ||
      p.center.x + outer > p.frame.width ||
      p.center.y + outer > p.frame.height) {
    throw Error(ErrorCode::ShapeExceedsFrame,
                "jagged shape of outer radius " + detail::format_double(outer) +
                    " does not fit in the frame");
  }
}

Mask sample_nearest(const Mask& mask, Point center, double a, double b,
                    double c, double d) {
  // (a b; c d) maps output offsets from `center` back to source offsets.
  Mask out(mask.frame());
  for (std::uint32_t y = 0; y < mask.height(); ++y) {
    const double oy = y + 0.5 - center.y;
    for (std::uint32_t x = 0; x < mask.width(); ++x) {
      const double ox = x + 0.5 - center.x;
      const double sx = center.x + a * ox + b * oy;
      const double sy = center.y + c * ox + d * oy;
      if (mask.at_or_background(static_cast<std::int64_t>(std::floor(sx)),
                                static_cast<std::int64_t>(std::floor(sy))))
        out.set(x, y, true);
    }
  }
  return out;
}

Mask translate(const Mask& mask, std::int32_t dx, std::int32_t dy) {
  Mask out(mask.frame());
  for (std::uint32_t y = 0; y < mask.height(); ++y) {
    for (std::uint32_t x = 0; x < mask.width(); ++x) {
      if (mask.at_or_background(static_cast<std::int64_t>(x) - dx,
                                static_cast<std::int64_t>(y) - dy))
        out.set(x, y, true);
    }
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  const auto radius = static_cast<std::int64_t>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0;
  for (std::int64_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

Mask smooth(const Mask& mask, double sigma, double threshold) {
  if (!(sigma > 0)) return mask;
  const auto kernel = gaussian_kernel(sigma);
  const auto radius = static_cast<std::int64_t>(kernel.size() / 2);
  const auto w = static_cast<std::int64_t>(mask.width());
  const auto h = static_cast<std::int64_t>(mask.height());
  const auto data = mask.data();

  std::vector<double> horizontal(data.size(), 0.0);
  for (std::int64_t y = 0; y < h; ++y) {
    for (std::int64_t x = 0; x < w; ++x) {
      double acc = 0;
      const std::int64_t lo = std::max<std::int64_t>(0, x - radius);
      const std::int64_t hi = std::min<std::int64_t>(w - 1, x + radius);
      for (std::int64_t s = lo; s <= hi; ++s)
        if (data[y * w + s]) acc += kernel[s - x + radius];
      horizontal[y * w + x] = acc;
    }
  }
  Mask out(mask.frame());
  for (std::int64_t y = 0; y < h; ++y) {
    const std::int64_t lo = std::max<std::int64_t>(0, y - radius);
    const std::int64_t hi = std::min<std::int64_t>(h - 1, y + radius);
    for (std::int64_t x = 0; x < w; ++x) {
      double acc = 0;
      for (std::int64_t s = lo; s <= hi; ++s)
        acc += kernel[s - y + radius] * horizontal[s * w + x];
      if (acc >= threshold)
        out.set(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y),
                true);
    }
  }
  return out;
}

double parse_number(std::string_view tok, std::string_view what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

std::int32_t parse_int(std::string_view tok, std::string_view what) {
  std::int32_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = text.find(sep, pos);
    if (end == std::string_view::npos) {
      parts.push_back(text.substr(pos));
      return parts;
    }
    parts.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
}

// Closed polygon from a radius profile sampled at `count` evenly spaced
// angles starting at `start`.
template <typename RadiusFn>
std::vector<Point> radial_outline(Point center, std::size_t count,
                                  double start, RadiusFn&& radius) {
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double theta = start + kTwoPi * static_cast<double>(i) / count;
    const double r = radius(theta);
    pts.push_back({center.x + r * std::cos(theta), center.y + r * std::sin(theta)});
  }
  return pts;
}

// Each sampler draws a shape centred in `frame` whose outer extent stays
// within `extent` pixels of the centre.
Mask sample_jagged(Frame frame, double extent, Rng& rng) {
  JaggedShapeParams p;
  p.frame = frame;
  p.center = {frame.width / 2.0, frame.height / 2.0};
  p.base_radius = rng.uniform(0.6, 0.8) * extent;
  p.tooth_amplitude = rng.uniform(0.1, 0.2) * extent;
  p.tooth_count = static_cast<std::uint32_t>(rng.uniform_int(8, 24));
  p.seed = rng.next();
  return generate_jagged(p);
}

Mask sample_blob(Frame frame, double extent, Rng& rng) {
  const Point c{frame.width / 2.0, frame.height / 2.0};
  const double base = rng.uniform(0.65, 0.8) * extent;
  double amp[3];
  double phase[3];
  for (int i = 0; i < 3; ++i) {
    amp[i] = rng.uniform(0.0, 0.08);
    phase[i] = rng.uniform(0.0, kTwoPi);
  }
  auto pts = radial_outline(c, 360, 0.0, [&](double t) {
    double r = 1.0;
    for (int i = 0; i < 3; ++i) r += amp[i] * std::cos((i + 2) * t + phase[i]);
    return base * r;
  });
  return fill_polygon(pts, frame);
}

Mask sample_ellipse(Frame frame, double extent, Rng& rng) {
  const Point c{frame.width / 2.0, frame.height / 2.0};
  const double a = rng.uniform(0.6, 1.0) * extent;
  const double b = rng.uniform(0.35, 0.6) * extent;
  const double tilt = rng.uniform(0.0, std::numbers::pi);
  std::vector<Point> pts;
  for (int i = 0; i < 360; ++i) {
    const double t = kTwoPi * i / 360.0;
    const double ex = a * std::cos(t);
    const double ey = b * std::sin(t);
    pts.push_back({c.x + ex * std::cos(tilt) - ey * std::sin(tilt),
                   c.y + ex * std::sin(tilt) + ey * std::cos(tilt)});
  }
  return fill_polygon(pts, frame);
}

Mask sample_polygon(Frame frame, double extent, Rng& rng) {
  const Point c{frame.width / 2.0, frame.height / 2.0};
  const auto n = static_cast<std::size_t>(rng.uniform_int(5, 12));
  std::vector<double> radii(n);
  for (auto& r : radii) r = rng.uniform(0.55, 1.0) * extent;
  const double start = rng.uniform(0.0, kTwoPi);
  std::size_t i = 0;
  auto pts = radial_outline(c, n, start, [&](double) { return radii[i++]; });
  return fill_polygon(pts, frame);
}

Mask sample_rectangle(Frame frame, double extent, Rng& rng) {
  const Point c{frame.width / 2.0, frame.height / 2.0};
  // Half-diagonal bounded by the extent.
  const double aspect = rng.uniform(0.3, 1.0);
  const double half_w = extent / std::sqrt(1.0 + aspect * aspect);
  const double half_h = aspect * half_w;
  const double tilt = rng.uniform(0.0, std::numbers::pi);
  const double ct = std::cos(tilt);
  const double st = std::sin(tilt);
  std::vector<Point> pts;
  for (auto [sx, sy] : {std::pair{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}) {
    const double ox = sx * half_w;
    const double oy = sy * half_h;
    pts.push_back({c.x + ox * ct - oy * st, c.y + ox * st + oy * ct});
  }
  return fill_polygon(pts, frame);
}

}  // namespace

std::uint64_t Rng::next() noexcept {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  Rng rng(seed ^ (index * 0xd1b54a32d192ed03ULL));
  rng.next();
  return rng.next();
}

std::vector<Point> jagged_outline(const JaggedShapeParams& params) {
  validate(params);
  // Seed 0 keeps the phase at zero so the default shape is reproducible by
  // hand; other seeds draw a phase in [0, 1) tooth periods.
  const double phase = params.seed == 0 ? 0.0 : Rng(params.seed).uniform();
  const std::size_t n = static_cast<std::size_t>(params.tooth_count) * kSamplesPerTooth;
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Sample positions land exactly on every tooth tip and valley.
    const double tooth_pos = static_cast<double>(j) / kSamplesPerTooth;
    const double theta = kTwoPi * (tooth_pos - phase) / params.tooth_count;
    const double r =
        params.base_radius + params.tooth_amplitude * triangle_wave(tooth_pos);
    pts.push_back({params.center.x + r * std::cos(theta),
                   params.center.y + r * std::sin(theta)});
  }
  return pts;
}

Mask generate_jagged(const JaggedShapeParams& params) {
  return fill_polygon(jagged_outline(params), params.frame);
}

std::string_view to_string(PerturbationKind kind) noexcept {
  switch (kind) {
    case PerturbationKind::Scale: return "scale";
    case PerturbationKind::Translate: return "translate";
    case PerturbationKind::Rotate: return "rotate";
    case PerturbationKind::Smooth: return "smooth";
  }
  return "unknown";
}

PerturbationKind parse_perturbation_kind(std::string_view name) {
  if (name == "scale") return PerturbationKind::Scale;
  if (name == "translate") return PerturbationKind::Translate;
  if (name == "rotate") return PerturbationKind::Rotate;
  if (name == "smooth") return PerturbationKind::Smooth;
  throw Error(ErrorCode::InvalidArgument,
              "unknown perturbation '" + std::string(name) + "'");
}

PerturbationSpec PerturbationSpec::scale(double factor) {
  PerturbationSpec s;
  s.kind = PerturbationKind::Scale;
  s.factor = factor;
  return s;
}

PerturbationSpec PerturbationSpec::translate(std::int32_t dx, std::int32_t dy) {
  PerturbationSpec s;
  s.kind = PerturbationKind::Translate;
  s.dx = dx;
  s.dy = dy;
  return s;
}

PerturbationSpec PerturbationSpec::rotate(double degrees) {
  PerturbationSpec s;
  s.kind = PerturbationKind::Rotate;
  s.degrees = degrees;
  return s;
}

PerturbationSpec PerturbationSpec::smooth(double sigma, double threshold) {
  PerturbationSpec s;
  s.kind = PerturbationKind::Smooth;
  s.sigma = sigma;
  s.threshold = threshold;
  return s;
}

PerturbationSpec PerturbationSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts[0] == "identity" && parts.size() == 1) return identity();
  const PerturbationKind kind = parse_perturbation_kind(parts[0]);
  switch (kind) {
    case PerturbationKind::Scale:
      if (parts.size() == 2) return scale(parse_number(parts[1], "scale factor"));
      break;
    case PerturbationKind::Translate:
      if (parts.size() == 3)
        return translate(parse_int(parts[1], "dx"), parse_int(parts[2], "dy"));
      break;
    case PerturbationKind::Rotate:
      if (parts.size() == 2) return rotate(parse_number(parts[1], "angle"));
      break;
    case PerturbationKind::Smooth:
      if (parts.size() == 2) return smooth(parse_number(parts[1], "sigma"));
      if (parts.size() == 3)
        return smooth(parse_number(parts[1], "sigma"),
                      parse_number(parts[2], "threshold"));
      break;
  }
  throw Error(ErrorCode::InvalidArgument,
              "malformed perturbation '" + std::string(text) + "'");
}

std::string PerturbationSpec::to_string() const {
  using detail::format_double;
  std::string out(synth::to_string(kind));
  switch (kind) {
    case PerturbationKind::Scale:
      return out + ":" + format_double(factor);
    case PerturbationKind::Translate:
      return out + ":" + std::to_string(dx) + ":" + std::to_string(dy);
    case PerturbationKind::Rotate:
      return out + ":" + format_double(degrees);
    case PerturbationKind::Smooth:
      return out + ":" + format_double(sigma) + ":" + format_double(threshold);
  }
  return out;
}

Point centroid(const Mask& mask) {
  double sx = 0;
  double sy = 0;
  std::size_t n = 0;
  for (std::uint32_t y = 0; y < mask.height(); ++y) {
    for (std::uint32_t x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      sx += x + 0.5;
      sy += y + 0.5;
      ++n;
    }
  }
  if (n == 0) return {mask.width() / 2.0, mask.height() / 2.0};
  return {sx / n, sy / n};
}

Mask apply_perturbation(const Mask& mask, const PerturbationSpec& spec) {
  switch (spec.kind) {
    case PerturbationKind::Translate:
      if (spec.dx == 0 && spec.dy == 0) return mask;
      return translate(mask, spec.dx, spec.dy);
    case PerturbationKind::Scale: {
      if (!(spec.factor > 0)) {
        throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
      }
      if (spec.factor == 1.0) return mask;
      const double inv = 1.0 / spec.factor;
      return sample_nearest(mask, centroid(mask), inv, 0, 0, inv);
    }
    case PerturbationKind::Rotate: {
      if (spec.degrees == 0.0) return mask;
      const double rad = spec.degrees * std::numbers::pi / 180.0;
      const double c = std::cos(rad);
      const double s = std::sin(rad);
      // Inverse rotation: output offset -> source offset.
      return sample_nearest(mask, centroid(mask), c, s, -s, c);
    }
    case PerturbationKind::Smooth:
      if (!(spec.threshold > 0 && spec.threshold < 1)) {
        throw Error(ErrorCode::InvalidArgument,
                    "smoothing threshold must lie in (0, 1)");
      }
      return smooth(mask, spec.sigma, spec.threshold);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown perturbation kind");
}

Mask apply_all(const Mask& mask, const std::vector<PerturbationSpec>& specs) {
  Mask out = mask;
  for (const auto& s : specs) out = apply_perturbation(out, s);
  return out;
}

std::vector<PerturbationSpec> default_grid_rows() {
  return {PerturbationSpec::translate(8, 8), PerturbationSpec::translate(4, 4),
          PerturbationSpec::identity(), PerturbationSpec::scale(1.15)};
}

std::vector<double> default_grid_sigmas() { return {0, 1, 2, 3, 4, 5, 6}; }

std::vector<GridCell> generate_variant_grid(
    const JaggedShapeParams& gt_params, const std::vector<PerturbationSpec>& rows,
    const std::vector<double>& smoothing_levels, double threshold,
    unsigned threads) {
  const Mask gt = generate_jagged(gt_params);
  const std::size_t cols = smoothing_levels.size();
  std::vector<GridCell> cells;
  cells.reserve(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      cells.push_back(GridCell{
          r, c,
          {rows[r], PerturbationSpec::smooth(smoothing_levels[c], threshold)},
          Mask(gt.frame())});
    }
  }
  detail::parallel_for(cells.size(), threads, [&](std::size_t i) {
    cells[i].mask = apply_all(gt, cells[i].specs);
  });
  return cells;
}

Mask generate_comb(const CombParams& p) {
  if (p.tooth_width < 1 || p.body_width < 1 || p.body_height < 1) {
    throw Error(ErrorCode::InvalidArgument, "comb dimensions must be positive");
  }
  if (p.tooth_depth > p.top ||
      static_cast<std::uint64_t>(p.left) + p.body_width > p.frame.width ||
      static_cast<std::uint64_t>(p.top) + p.body_height > p.frame.height) {
    throw Error(ErrorCode::ShapeExceedsFrame, "comb does not fit in the frame");
  }
  Mask out(p.frame);
  for (std::uint32_t y = p.top; y < p.top + p.body_height; ++y)
    for (std::uint32_t x = p.left; x < p.left + p.body_width; ++x) out.set(x, y, true);
  for (std::uint32_t x = p.left; x < p.left + p.body_width; ++x) {
    if (((x - p.left) / p.tooth_width) % 2 != 0) continue;
    for (std::uint32_t y = p.top - p.tooth_depth; y < p.top; ++y) out.set(x, y, true);
  }
  return out;
}

Mask bounding_box(const Mask& mask) {
  std::uint32_t x0 = mask.width(), y0 = mask.height(), x1 = 0, y1 = 0;
  bool any = false;
  for (std::uint32_t y = 0; y < mask.height(); ++y) {
    for (std::uint32_t x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      any = true;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  Mask out(mask.frame());
  if (!any) return out;
  for (std::uint32_t y = y0; y <= y1; ++y)
    for (std::uint32_t x = x0; x <= x1; ++x) out.set(x, y, true);
  return out;
}

CombComparison comb_comparison(const CombParams& gt_params, double tolerance) {
  CombComparison out{generate_comb(gt_params), Mask(gt_params.frame),
                     Mask(gt_params.frame), 0};
  out.box = bounding_box(out.gt);
  const double target = iou(out.gt, out.box);
  CombParams candidate = gt_params;
  for (std::uint32_t depth = 1; depth <= gt_params.top; ++depth) {
    candidate.tooth_depth = depth;
    Mask comb = generate_comb(candidate);
    if (std::abs(iou(out.gt, comb) - target) < tolerance) {
      out.comb = std::move(comb);
      out.matched_depth = depth;
      return out;
    }
  }
  throw Error(ErrorCode::InvalidArgument,
              "no tooth depth reproduces the bounding-box IoU");
}

const std::vector<std::string>& synthetic_categories() {
  static const std::vector<std::string> names{"jagged", "blob", "ellipse",
                                              "polygon", "rectangle"};
  return names;
}

Mask generate_category_sample(std::string_view category, Frame frame,
                              std::uint64_t seed) {
  Rng rng(seed);
  // Object size is log-uniform between 15% and 100% of the usable half-frame,
  // leaving a margin for rigid perturbations.
  const double usable = 0.8 * std::min(frame.width, frame.height) / 2.0;
  const double extent = usable * std::exp(rng.uniform(std::log(0.15), 0.0));
  if (category == "jagged") return sample_jagged(frame, extent, rng);
  if (category == "blob") return sample_blob(frame, extent, rng);
  if (category == "ellipse") return sample_ellipse(frame, extent, rng);
  if (category == "polygon") return sample_polygon(frame, extent, rng);
  if (category == "rectangle") return sample_rectangle(frame, extent, rng);
  throw Error(ErrorCode::InvalidArgument,
              "unknown synthetic category '" + std::string(category) + "'");
}

}  // namespace miou::synth
