#include "miou/harness.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "format.hpp"
#include "json.hpp"
#include "miou/coco.hpp"
#include "parallel.hpp"

namespace miou::harness {

namespace {

using nlohmann::ordered_json;
using detail::format_double;

template <typename F>
MetricValue capture(F&& f) {
  try {
    return MetricValue{f(), std::nullopt};
  } catch (const Error& e) {
    return MetricValue{0, e.code()};
  }
}

MetricValue failed(ErrorCode code) { return MetricValue{0, code}; }

std::string cell(const MetricValue& v) {
  return v.ok() ? format_double(v.value) : std::string();
}

std::string_view to_string(Saturation s) {
  switch (s) {
    case Saturation::Positive: return "positive";
    case Saturation::Negative: return "negative";
    case Saturation::None: break;
  }
  return "none";
}

std::vector<std::pair<std::string_view, const MetricValue*>> named_metrics(
    const MetricReport& r) {
  return {{"iou", &r.iou},
          {"precision", &r.precision},
          {"recall", &r.recall},
          {"f1", &r.f1},
          {"dsc", &r.dsc},
          {"ltd", &r.ltd},
          {"miou", &r.miou},
          {"fractal_dim_gt", &r.fractal_dim_gt},
          {"fractal_dim_dt", &r.fractal_dim_dt}};
}

ordered_json parse_json(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::MalformedFormat,
                std::string("config is not valid JSON: ") + e.what());
  }
}

void reject_unknown_keys(const ordered_json& doc,
                         std::initializer_list<std::string_view> known) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::MalformedFormat, "config must be a JSON object");
  }
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
  }
}

template <typename T>
void read_opt(const ordered_json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::MalformedFormat,
                std::string("config key '") + key + "': " + e.what());
  }
}

void read_scales(const ordered_json& doc, ScaleSet& out) {
  if (!doc.contains("scales")) return;
  std::vector<std::uint32_t> sizes;
  read_opt(doc, "scales", sizes);
  out = ScaleSet(std::move(sizes));
}

std::uint64_t group_salt(Group g) {
  return g == Group::Rigid ? 0x5249474944ULL : 0x534d4f4f5448ULL;
}

}  // namespace

MetricReport evaluate_pair(const Mask& gt, const Mask& dt,
                           const ScaleSet& scales, bool use_contour,
                           std::string pair_id) {
  require_same_frame(gt, dt);
  MetricReport r;
  r.pair_id = std::move(pair_id);
  r.used_contour = use_contour;
  r.scale_set = scales;

  const std::size_t n_gt = gt.pixel_count();
  const std::size_t n_dt = dt.pixel_count();
  const std::size_t inter = intersection_count(gt, dt);

  r.iou = capture([&] { return iou(gt, dt); });
  r.precision = n_dt == 0 ? failed(ErrorCode::EmptyDetection)
                          : MetricValue{static_cast<double>(inter) / n_dt, {}};
  r.recall = n_gt == 0 ? failed(ErrorCode::EmptyGroundTruth)
                       : MetricValue{static_cast<double>(inter) / n_gt, {}};
  // The harmonic mean of precision and recall reduces to 2|∩| / (|gt| + |dt|),
  // which stays defined when only one side is empty.
  r.f1 = n_gt + n_dt == 0
             ? failed(ErrorCode::BothEmpty)
             : MetricValue{static_cast<double>(2 * inter) / (n_gt + n_dt), {}};
  try {
    const DiceLogit d = dsc_ltd(gt, dt);
    r.dsc = {d.dsc, {}};
    r.ltd = {d.ltd, {}};
    r.ltd_saturation = d.saturation;
  } catch (const Error& e) {
    r.dsc = failed(e.code());
    r.ltd = failed(e.code());
  }

  try {
    MiouResult m = miou::miou(gt, dt, scales, use_contour);
    r.miou = {m.miou, {}};
    r.ratio_curve = std::move(m.curve);
  } catch (const Error& e) {
    r.miou = failed(e.code());
  }

  const FractalMode mode = use_contour ? FractalMode::Contour : FractalMode::Area;
  r.fractal_dim_gt =
      capture([&] { return fractal_dimension(gt, scales, mode).dimension; });
  r.fractal_dim_dt =
      capture([&] { return fractal_dimension(dt, scales, mode).dimension; });
  return r;
}

std::vector<MetricReport> evaluate_batch(const std::vector<PairInput>& pairs,
                                         const ScaleSet& scales,
                                         bool use_contour, unsigned threads) {
  std::vector<MetricReport> out(pairs.size());
  detail::parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const PairInput& p = pairs[i];
    if (p.gt.frame() != p.dt.frame()) {
      MetricReport r;
      r.pair_id = p.pair_id;
      r.used_contour = use_contour;
      r.scale_set = scales;
      r.pair_error = ErrorCode::DimensionMismatch;
      for (MetricValue* v : {&r.iou, &r.precision, &r.recall, &r.f1, &r.dsc,
                             &r.ltd, &r.miou, &r.fractal_dim_gt,
                             &r.fractal_dim_dt})
        *v = failed(ErrorCode::DimensionMismatch);
      out[i] = std::move(r);
      return;
    }
    out[i] = evaluate_pair(p.gt, p.dt, scales, use_contour, p.pair_id);
  });
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.pair_id < b.pair_id;
  });
  return out;
}

DirectoryPairs load_directory_pairs(const std::filesystem::path& gt_dir,
                                    const std::filesystem::path& dt_dir) {
  auto list = [](const std::filesystem::path& dir) {
    std::set<std::string> names;
    std::error_code ec;
    std::filesystem::directory_iterator it(dir, ec);
    if (ec) {
      throw Error(ErrorCode::UnreadableFile,
                  "cannot list " + dir.string() + ": " + ec.message());
    }
    for (const auto& entry : it)
      if (entry.is_regular_file()) names.insert(entry.path().filename().string());
    return names;
  };
  const auto gt_names = list(gt_dir);
  const auto dt_names = list(dt_dir);

  DirectoryPairs out;
  for (const auto& name : gt_names) {
    if (!dt_names.contains(name)) {
      out.unmatched.push_back(name);
      continue;
    }
    const auto fmt = format_from_extension(name);
    if (fmt == MaskFormat::CocoJson) {
      throw Error(ErrorCode::InvalidArgument,
                  "batch mode reads PNG or text-grid masks, not " + name);
    }
    out.pairs.push_back(PairInput{name, load_mask(gt_dir / name, fmt),
                                  load_mask(dt_dir / name, fmt)});
  }
  for (const auto& name : dt_names)
    if (!gt_names.contains(name)) out.unmatched.push_back(name);
  std::sort(out.unmatched.begin(), out.unmatched.end());
  return out;
}

std::string report_csv_header() {
  return "pair_id,iou,precision,recall,f1,dsc,ltd,miou,fractal_dim_gt,"
         "fractal_dim_dt,used_contour,scales,ratio_curve,errors";
}

std::string report_csv_row(const MetricReport& r) {
  std::string curve;
  for (std::size_t i = 0; i < r.ratio_curve.points.size(); ++i) {
    if (i) curve += ';';
    curve += format_double(r.ratio_curve.points[i].ratio);
  }
  std::string errors;
  for (const auto& [name, v] : named_metrics(r)) {
    if (v->ok()) continue;
    if (!errors.empty()) errors += ';';
    errors += std::string(name) + "=" + std::string(to_string(*v->error));
  }
  std::string scales = r.scale_set.to_string();
  std::replace(scales.begin(), scales.end(), ',', ';');

  std::string row = r.pair_id;
  for (const MetricValue* v : {&r.iou, &r.precision, &r.recall, &r.f1, &r.dsc,
                               &r.ltd, &r.miou, &r.fractal_dim_gt,
                               &r.fractal_dim_dt}) {
    row += ',';
    row += cell(*v);
  }
  row += r.used_contour ? ",true," : ",false,";
  row += scales + "," + curve + "," + errors;
  return row;
}

std::string reports_to_csv(const std::vector<MetricReport>& reports) {
  std::string out = report_csv_header() + "\n";
  for (const auto& r : reports) out += report_csv_row(r) + "\n";
  return out;
}

std::string report_to_json(const MetricReport& r) {
  ordered_json j;
  j["pair_id"] = r.pair_id;
  ordered_json errors = ordered_json::object();
  for (const auto& [name, v] : named_metrics(r)) {
    const std::string key(name);
    // JSON has no infinities; saturation is reported beside ltd instead.
    if (v->ok() && std::isfinite(v->value)) {
      j[key] = v->value;
    } else {
      j[key] = nullptr;
    }
    if (!v->ok()) errors[key] = std::string(to_string(*v->error));
  }
  j["ltd_saturation"] = std::string(to_string(r.ltd_saturation));
  j["used_contour"] = r.used_contour;
  j["scales"] = std::vector<std::uint32_t>(r.scale_set.cell_sizes().begin(),
                                           r.scale_set.cell_sizes().end());
  ordered_json curve = ordered_json::array();
  for (std::size_t i = 0; i < r.ratio_curve.points.size(); ++i) {
    curve.push_back({{"cell_size", r.ratio_curve.raw_scales[i]},
                     {"x", r.ratio_curve.points[i].normalized_scale},
                     {"r", r.ratio_curve.points[i].ratio}});
  }
  j["ratio_curve"] = std::move(curve);
  j["errors"] = std::move(errors);
  return j.dump(2);
}

GridConfig parse_grid_config(std::string_view json_text) {
  const ordered_json doc = parse_json(json_text);
  reject_unknown_keys(doc, {"seed", "width", "height", "center_x", "center_y",
                            "base_radius", "tooth_amplitude", "tooth_count",
                            "rows", "sigmas", "threshold", "scales",
                            "use_contour", "threads"});
  GridConfig c;
  auto& s = c.shape;
  read_opt(doc, "seed", s.seed);
  read_opt(doc, "width", s.frame.width);
  read_opt(doc, "height", s.frame.height);
  s.center = {s.frame.width / 2.0, s.frame.height / 2.0};
  read_opt(doc, "center_x", s.center.x);
  read_opt(doc, "center_y", s.center.y);
  read_opt(doc, "base_radius", s.base_radius);
  read_opt(doc, "tooth_amplitude", s.tooth_amplitude);
  read_opt(doc, "tooth_count", s.tooth_count);
  if (doc.contains("rows")) {
    std::vector<std::string> rows;
    read_opt(doc, "rows", rows);
    c.rows.clear();
    for (const auto& text : rows)
      c.rows.push_back(synth::PerturbationSpec::parse(text));
  }
  read_opt(doc, "sigmas", c.sigmas);
  read_opt(doc, "threshold", c.threshold);
  read_scales(doc, c.scales);
  read_opt(doc, "use_contour", c.use_contour);
  read_opt(doc, "threads", c.threads);
  // Reject a shape that does not fit before any work starts.
  synth::jagged_outline(s);
  return c;
}

std::vector<GridRow> run_grid_experiment(const GridConfig& config) {
  const Mask gt = synth::generate_jagged(config.shape);
  const auto cells = synth::generate_variant_grid(
      config.shape, config.rows, config.sigmas, config.threshold, config.threads);
  std::vector<GridRow> out(cells.size());
  detail::parallel_for(cells.size(), config.threads, [&](std::size_t i) {
    const auto& c = cells[i];
    out[i] = GridRow{c.row, c.col,
                     evaluate_pair(gt, c.mask, config.scales, config.use_contour,
                                   "r" + std::to_string(c.row) + "_c" +
                                       std::to_string(c.col))};
  });
  return out;
}

std::string grid_to_csv(const std::vector<GridRow>& rows) {
  std::string out = "row,col,iou,precision,recall,f1,dsc,miou\n";
  for (const auto& g : rows) {
    const auto& r = g.report;
    out += std::to_string(g.row) + "," + std::to_string(g.col);
    for (const MetricValue* v :
         {&r.iou, &r.precision, &r.recall, &r.f1, &r.dsc, &r.miou}) {
      out += ',';
      out += cell(*v);
    }
    out += '\n';
  }
  return out;
}

void write_grid(const std::filesystem::path& out_dir, const GridConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::UnwritableDestination,
                "cannot create " + out_dir.string() + ": " + ec.message());
  }
  save_mask(synth::generate_jagged(config.shape), out_dir / "gt.png",
            MaskFormat::Png);
  const auto cells = synth::generate_variant_grid(
      config.shape, config.rows, config.sigmas, config.threshold, config.threads);
  ordered_json manifest = ordered_json::array();
  for (const auto& c : cells) {
    const std::string file =
        "r" + std::to_string(c.row) + "_c" + std::to_string(c.col) + ".png";
    save_mask(c.mask, out_dir / file, MaskFormat::Png);
    std::vector<std::string> specs;
    for (const auto& s : c.specs) specs.push_back(s.to_string());
    manifest.push_back(
        {{"row", c.row}, {"col", c.col}, {"spec", specs}, {"file", file}});
  }
  std::ofstream out(out_dir / "manifest.json", std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorCode::UnwritableDestination,
                "cannot write " + (out_dir / "manifest.json").string());
  }
}

std::string_view to_string(Group group) noexcept {
  return group == Group::Rigid ? "rigid" : "smooth";
}

Group parse_group(std::string_view name) {
  if (name == "rigid") return Group::Rigid;
  if (name == "smooth") return Group::Smooth;
  throw Error(ErrorCode::InvalidArgument,
              "unknown group '" + std::string(name) + "'");
}

DistributionSummary summarize(std::vector<double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot summarise an empty sample");
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double p) {
    const double h = (values.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - lo) * (values[lo + 1] - values[lo]);
  };
  DistributionSummary s;
  s.n = values.size();
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

std::vector<DistributionSummary> run_distribution_experiment(
    const std::vector<CategorizedMask>& masks, Group group,
    const ScaleSet& scales, std::uint64_t seed, const PerturbationRanges& ranges,
    bool use_contour, unsigned threads) {
  struct Score {
    bool used = false;
    double iou = 0;
    double miou = 0;
  };
  std::vector<Score> scores(masks.size());
  detail::parallel_for(masks.size(), threads, [&](std::size_t i) {
    const Mask& gt = masks[i].mask;
    if (gt.empty()) return;
    synth::Rng rng(synth::derive_seed(seed ^ group_salt(group), i));
    std::vector<synth::PerturbationSpec> specs;
    if (group == Group::Rigid) {
      auto rot = synth::PerturbationSpec::rotate(
          rng.uniform(-ranges.max_rotation_deg, ranges.max_rotation_deg));
      const auto dx = rng.uniform_int(-ranges.max_translation_px,
                                      ranges.max_translation_px);
      const auto dy = rng.uniform_int(-ranges.max_translation_px,
                                      ranges.max_translation_px);
      specs = {rot, synth::PerturbationSpec::translate(
                        static_cast<std::int32_t>(dx),
                        static_cast<std::int32_t>(dy))};
    } else {
      specs = {synth::PerturbationSpec::smooth(
          rng.uniform(ranges.sigma_min, ranges.sigma_max), ranges.threshold)};
    }
    const Mask dt = synth::apply_all(gt, specs);
    const MetricReport r = evaluate_pair(gt, dt, scales, use_contour);
    scores[i] = Score{true, r.iou.ok() ? r.iou.value : 0.0,
                      r.miou.ok() ? r.miou.value : 0.0};
  });

  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_cat;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    if (!scores[i].used) continue;
    const auto& cat = masks[i].category;
    if (!by_cat.contains(cat)) order.push_back(cat);
    by_cat[cat].first.push_back(scores[i].iou);
    by_cat[cat].second.push_back(scores[i].miou);
  }
  std::vector<DistributionSummary> out;
  for (const auto& cat : order) {
    auto& [ious, mious] = by_cat[cat];
    for (auto [metric, values] : {std::pair{"iou", &ious}, {"miou", &mious}}) {
      DistributionSummary s = summarize(*values);
      s.group = group;
      s.category = cat;
      s.metric = metric;
      out.push_back(std::move(s));
    }
  }
  return out;
}

DistributionConfig parse_distribution_config(std::string_view json_text) {
  const ordered_json doc = parse_json(json_text);
  reject_unknown_keys(
      doc, {"groups", "seed", "scales", "use_contour", "threads",
            "max_rotation_deg", "max_translation_px", "sigma_min", "sigma_max",
            "threshold", "masks_per_category", "categories", "width", "height",
            "coco_annotations", "coco_categories"});
  DistributionConfig c;
  if (doc.contains("groups")) {
    std::vector<std::string> names;
    read_opt(doc, "groups", names);
    c.groups.clear();
    for (const auto& n : names) c.groups.push_back(parse_group(n));
  }
  read_opt(doc, "seed", c.seed);
  read_scales(doc, c.scales);
  read_opt(doc, "use_contour", c.use_contour);
  read_opt(doc, "threads", c.threads);
  read_opt(doc, "max_rotation_deg", c.ranges.max_rotation_deg);
  read_opt(doc, "max_translation_px", c.ranges.max_translation_px);
  read_opt(doc, "sigma_min", c.ranges.sigma_min);
  read_opt(doc, "sigma_max", c.ranges.sigma_max);
  read_opt(doc, "threshold", c.ranges.threshold);
  read_opt(doc, "masks_per_category", c.masks_per_category);
  read_opt(doc, "categories", c.categories);
  read_opt(doc, "width", c.frame.width);
  read_opt(doc, "height", c.frame.height);
  if (doc.contains("coco_annotations")) {
    std::string path;
    read_opt(doc, "coco_annotations", path);
    c.coco_annotations = path;
  }
  read_opt(doc, "coco_categories", c.coco_categories);
  if (c.ranges.sigma_min > c.ranges.sigma_max || c.ranges.max_rotation_deg < 0 ||
      c.ranges.max_translation_px < 0) {
    throw Error(ErrorCode::InvalidArgument, "perturbation ranges are inverted");
  }
  return c;
}

std::vector<CategorizedMask> collect_masks(const DistributionConfig& config) {
  std::vector<CategorizedMask> out;
  if (!config.coco_annotations) {
    for (std::size_t c = 0; c < config.categories.size(); ++c) {
      for (std::size_t k = 0; k < config.masks_per_category; ++k) {
        const auto seed =
            synth::derive_seed(config.seed, c * config.masks_per_category + k);
        out.push_back({config.categories[c],
                       synth::generate_category_sample(config.categories[c],
                                                       config.frame, seed)});
      }
    }
    return out;
  }

  auto loaded = coco::load_all(*config.coco_annotations);
  std::map<std::string, std::vector<std::size_t>> by_cat;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < loaded.annotations.size(); ++i) {
    const auto& a = loaded.annotations[i];
    std::string name =
        a.category.empty() ? std::to_string(a.category_id) : a.category;
    if (!config.coco_categories.empty() &&
        std::find(config.coco_categories.begin(), config.coco_categories.end(),
                  name) == config.coco_categories.end())
      continue;
    if (a.mask.empty()) continue;
    if (!by_cat.contains(name)) order.push_back(name);
    by_cat[name].push_back(i);
  }
  for (const auto& name : order) {
    auto& idx = by_cat[name];
    // Seeded subset, then back to file order.
    synth::Rng rng(config.seed);
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[static_cast<std::size_t>(
                                rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    idx.resize(std::min(idx.size(), config.masks_per_category));
    std::sort(idx.begin(), idx.end());
    for (std::size_t i : idx)
      out.push_back({name, std::move(loaded.annotations[i].mask)});
  }
  return out;
}

std::vector<DistributionSummary> run_distribution_config(
    const DistributionConfig& config) {
  const auto masks = collect_masks(config);
  std::vector<DistributionSummary> out;
  for (Group g : config.groups) {
    auto part = run_distribution_experiment(masks, g, config.scales, config.seed,
                                            config.ranges, config.use_contour,
                                            config.threads);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string summaries_to_csv(const std::vector<DistributionSummary>& rows) {
  std::string out = "group,category,metric,n,min,q1,median,q3,max\n";
  for (const auto& s : rows) {
    out += std::string(to_string(s.group)) + "," + s.category + "," + s.metric +
           "," + std::to_string(s.n) + "," + format_double(s.min) + "," +
           format_double(s.q1) + "," + format_double(s.median) + "," +
           format_double(s.q3) + "," + format_double(s.max) + "\n";
  }
  return out;
}

}  // namespace miou::harness
