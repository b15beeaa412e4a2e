// Command-line front end. Talks to the library only through the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "miou/miou.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitUndefined = 3;

struct MaskDeleter {
  void operator()(miou_mask* m) const noexcept { miou_mask_destroy(m); }
};
using MaskPtr = std::unique_ptr<miou_mask, MaskDeleter>;

struct StringDeleter {
  void operator()(char* s) const noexcept { miou_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

// Carries a library status up to main().
struct Failure {
  miou_status status;
};

void check(miou_status status) {
  if (status == MIOU_OK) return;
  std::cerr << "error: " << miou_status_name(status) << ": " << miou_last_error()
            << "\n";
  throw Failure{status};
}

int exit_code(miou_status status) {
  return miou_status_is_metric_undefined(status) ? kExitUndefined : kExitInput;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<std::uint32_t> parse_scales(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (const auto& tok : split(text, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size() || v < 0 || v > UINT32_MAX) throw std::out_of_range(tok);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      std::cerr << "error: bad cell size '" << tok << "'\n";
      throw Failure{MIOU_ERR_INVALID_ARGUMENT};
    }
  }
  return out;
}

MaskPtr load(const std::string& path, long long annotation_id) {
  miou_mask* raw = nullptr;
  check(miou_mask_load(path.c_str(), MIOU_FORMAT_AUTO, annotation_id, &raw));
  return MaskPtr(raw);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    throw Failure{MIOU_ERR_UNREADABLE_FILE};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    throw Failure{MIOU_ERR_UNWRITABLE_DESTINATION};
  }
}

const std::uint32_t* scale_ptr(const std::vector<std::uint32_t>& s) {
  return s.empty() ? nullptr : s.data();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale IoU and area-overlap metrics for binary masks"};
  app.require_subcommand(1);

  std::string scales_text;
  std::vector<std::uint32_t> scales;

  // eval
  auto* eval = app.add_subcommand("eval", "Score one detection against a ground truth");
  std::string gt_path, dt_path, report_format = "json";
  long long gt_ann = -1, dt_ann = -1;
  bool area = false;
  eval->add_option("--gt", gt_path, "Ground-truth mask (.png, .json, or text grid)")->required();
  eval->add_option("--dt", dt_path, "Detected mask")->required();
  eval->add_option("--gt-ann", gt_ann, "Annotation id when --gt is COCO JSON");
  eval->add_option("--dt-ann", dt_ann, "Annotation id when --dt is COCO JSON");
  eval->add_option("--scales", scales_text, "Comma-separated cell sizes");
  eval->add_flag("--area", area, "Compute MIoU on regions instead of contours");
  eval->add_option("--format", report_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));

  // batch
  auto* batch = app.add_subcommand("batch", "Score every same-named pair in two directories");
  std::string gt_dir, dt_dir, out_path;
  unsigned threads = 0;
  batch->add_option("--gt-dir", gt_dir)->required();
  batch->add_option("--dt-dir", dt_dir)->required();
  batch->add_option("--out", out_path, "CSV destination ('-' for stdout)")->required();
  batch->add_option("--scales", scales_text, "Comma-separated cell sizes");
  batch->add_flag("--area", area, "Compute MIoU on regions instead of contours");
  batch->add_option("--threads", threads, "Worker threads (0 = all cores)");

  // synth grid
  auto* synth = app.add_subcommand("synth", "Generate synthetic masks");
  synth->require_subcommand(1);
  auto* synth_grid = synth->add_subcommand("grid", "Write the variant grid as PNGs plus manifest.json");
  std::string out_dir, rows_text, sigmas_text;
  std::uint64_t seed = 0;
  synth_grid->add_option("--out", out_dir, "Output directory")->required();
  synth_grid->add_option("--rows", rows_text,
                         "Row transforms, e.g. translate:8:8,identity,scale:1.15");
  synth_grid->add_option("--sigmas", sigmas_text, "Smoothing sigmas, e.g. 0,1,2");
  synth_grid->add_option("--seed", seed, "Tooth-phase seed of the ground truth");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a configured experiment");
  std::string experiment_kind, config_path;
  experiment->add_option("kind", experiment_kind, "grid or distribution")
      ->required()
      ->check(CLI::IsMember({"grid", "distribution"}));
  experiment->add_option("--config", config_path, "JSON config file")->required();
  experiment->add_option("--out", out_path, "CSV destination ('-' for stdout)")->required();

  // fractal
  auto* fractal = app.add_subcommand("fractal", "Box-counting dimension of a mask");
  std::string mask_path, mode = "contour";
  long long mask_ann = -1;
  fractal->add_option("--mask", mask_path)->required();
  fractal->add_option("--ann", mask_ann, "Annotation id when --mask is COCO JSON");
  fractal->add_option("--mode", mode)->check(CLI::IsMember({"contour", "area"}));
  fractal->add_option("--scales", scales_text, "Comma-separated cell sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (!scales_text.empty()) scales = parse_scales(scales_text);
    const std::uint32_t* sp = scale_ptr(scales);

    if (eval->parsed()) {
      MaskPtr gt = load(gt_path, gt_ann);
      MaskPtr dt = load(dt_path, dt_ann);
      char* text = nullptr;
      check(miou_evaluate_pair(gt.get(), dt.get(), sp, scales.size(), !area,
                               dt_path.c_str(),
                               report_format == "csv" ? MIOU_REPORT_CSV
                                                      : MIOU_REPORT_JSON,
                               &text));
      CString owned(text);
      std::fputs(text, stdout);
      if (miou_mask_pixel_count(gt.get()) == 0) {
        std::cerr << "error: EmptyGroundTruth: MIoU is undefined for an empty "
                     "ground truth\n";
        return kExitUndefined;
      }
      return kExitOk;
    }

    if (batch->parsed()) {
      char* csv = nullptr;
      char* unmatched = nullptr;
      check(miou_evaluate_directories(gt_dir.c_str(), dt_dir.c_str(), sp,
                                      scales.size(), !area, threads, &csv,
                                      &unmatched));
      CString owned_csv(csv);
      CString owned_unmatched(unmatched);
      for (const auto& name : split(unmatched, '\n'))
        if (!name.empty()) std::cerr << "warning: no partner for " << name << "\n";
      write_output(out_path, csv);
      return kExitOk;
    }

    if (synth_grid->parsed()) {
      nlohmann::ordered_json config;
      config["seed"] = seed;
      if (!rows_text.empty()) config["rows"] = split(rows_text, ',');
      if (!sigmas_text.empty()) {
        std::vector<double> sigmas;
        for (const auto& tok : split(sigmas_text, ',')) {
          try {
            sigmas.push_back(std::stod(tok));
          } catch (const std::exception&) {
            std::cerr << "error: bad sigma '" << tok << "'\n";
            return kExitInput;
          }
        }
        config["sigmas"] = sigmas;
      }
      check(miou_write_variant_grid(config.dump().c_str(), out_dir.c_str()));
      return kExitOk;
    }

    if (experiment->parsed()) {
      const std::string config = read_file(config_path);
      char* csv = nullptr;
      if (experiment_kind == "grid") {
        check(miou_run_grid_experiment(config.c_str(), &csv));
      } else {
        check(miou_run_distribution_experiment(config.c_str(), &csv));
      }
      CString owned(csv);
      write_output(out_path, csv);
      return kExitOk;
    }

    if (fractal->parsed()) {
      MaskPtr mask = load(mask_path, mask_ann);
      const std::size_t n = scales.empty() ? 10 : scales.size();
      std::vector<std::uint64_t> counts(n);
      double dim = 0, r2 = 0;
      check(miou_fractal_dimension(
          mask.get(), sp, scales.size(),
          mode == "area" ? MIOU_FRACTAL_AREA : MIOU_FRACTAL_CONTOUR, &dim, &r2,
          counts.data()));
      nlohmann::ordered_json out;
      out["dimension"] = dim;
      out["r_squared"] = r2;
      out["mode"] = mode;
      nlohmann::ordered_json samples = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t cell = scales.empty() ? (1u << i) : scales[i];
        samples.push_back({{"cell_size", cell}, {"count", counts[i]}});
      }
      out["samples"] = samples;
      std::cout << out.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const Failure& f) {
    return exit_code(f.status);
  }
  return kExitInput;
}
