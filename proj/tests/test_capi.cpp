// Exercises the shared library through its C interface only.

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "miou/miou.h"

namespace fs = std::filesystem;

namespace {

miou_mask* make(std::uint32_t w, std::uint32_t h, const std::vector<std::uint8_t>& data) {
  miou_mask* m = nullptr;
  REQUIRE(miou_mask_create(w, h, data.data(), &m) == MIOU_OK);
  return m;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  miou_string_free(s);
  return out;
}

fs::path tmp_dir(const std::string& name) {
  fs::path dir = fs::path(MIOU_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("c api: mask handles") {
  miou_mask* m = make(3, 2, {0, 1, 0, 1, 1, 9});
  CHECK(miou_mask_width(m) == 3);
  CHECK(miou_mask_height(m) == 2);
  CHECK(miou_mask_pixel_count(m) == 4);
  std::vector<std::uint8_t> out(6);
  CHECK(miou_mask_copy_data(m, out.data(), out.size()) == MIOU_OK);
  CHECK(out == std::vector<std::uint8_t>{0, 1, 0, 1, 1, 1});
  CHECK(miou_mask_copy_data(m, out.data(), 5) == MIOU_ERR_INVALID_ARGUMENT);
  miou_mask_destroy(m);
  miou_mask_destroy(nullptr);

  miou_mask* empty = nullptr;
  CHECK(miou_mask_create(4, 4, nullptr, &empty) == MIOU_OK);
  CHECK(miou_mask_pixel_count(empty) == 0);
  miou_mask_destroy(empty);

  miou_mask* bad = nullptr;
  CHECK(miou_mask_create(0, 4, nullptr, &bad) == MIOU_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::strlen(miou_last_error()) > 0);
  CHECK(miou_mask_create(1, 1, nullptr, nullptr) == MIOU_ERR_INVALID_ARGUMENT);
}

TEST_CASE("c api: status names and classes") {
  CHECK(std::string(miou_status_name(MIOU_OK)) == "Ok");
  CHECK(std::string(miou_status_name(MIOU_ERR_EMPTY_GROUND_TRUTH)) == "EmptyGroundTruth");
  CHECK(std::string(miou_status_name(static_cast<miou_status>(77))) == "Unknown");
  CHECK(miou_status_is_metric_undefined(MIOU_ERR_EMPTY_GROUND_TRUTH));
  CHECK(miou_status_is_metric_undefined(MIOU_ERR_BOTH_EMPTY));
  CHECK(!miou_status_is_metric_undefined(MIOU_ERR_UNREADABLE_FILE));
  CHECK(!miou_status_is_metric_undefined(MIOU_OK));
}

TEST_CASE("c api: metrics") {
  miou_mask* gt = make(3, 3, {1, 1, 0, 1, 1, 0, 0, 0, 0});
  miou_mask* dt = make(3, 3, {0, 0, 0, 0, 1, 1, 0, 1, 1});
  double v = -1;
  CHECK(miou_iou(gt, dt, &v) == MIOU_OK);
  CHECK(v == doctest::Approx(1.0 / 7.0));
  double p, r, f;
  CHECK(miou_precision_recall_f1(gt, dt, &p, &r, &f) == MIOU_OK);
  CHECK(p == 0.25);
  CHECK(r == 0.25);
  double dsc, ltd;
  int sat = 7;
  CHECK(miou_dsc_ltd(gt, dt, &dsc, &ltd, &sat) == MIOU_OK);
  CHECK(dsc == 0.25);
  CHECK(ltd == doctest::Approx(std::log(1.0 / 3.0)));
  CHECK(sat == 0);
  CHECK(miou_dsc_ltd(gt, gt, &dsc, &ltd, &sat) == MIOU_OK);
  CHECK(sat == 1);

  CHECK(miou_intersection_ratio(gt, dt, 3, &v) == MIOU_OK);
  CHECK(v == 1.0);
  CHECK(miou_intersection_ratio(gt, dt, 0, &v) == MIOU_ERR_INVALID_CELL_SIZE);

  const std::uint32_t scales[] = {1, 3};
  double ratios[2] = {-1, -1};
  CHECK(miou_compute(gt, dt, scales, 2, 0, &v, ratios) == MIOU_OK);
  CHECK(ratios[0] == 0.25);
  CHECK(ratios[1] == 1.0);
  CHECK(v == 0.625);
  CHECK(miou_compute(gt, gt, nullptr, 0, 1, &v, nullptr) == MIOU_OK);
  CHECK(v == 1.0);
  CHECK(miou_compute(gt, dt, scales, 1, 1, &v, nullptr) == MIOU_ERR_SCALE_SET_TOO_SMALL);
  CHECK(miou_compute(gt, dt, nullptr, 3, 1, &v, nullptr) == MIOU_ERR_INVALID_ARGUMENT);

  miou_mask* none = nullptr;
  REQUIRE(miou_mask_create(3, 3, nullptr, &none) == MIOU_OK);
  CHECK(miou_compute(none, dt, nullptr, 0, 1, &v, nullptr) == MIOU_ERR_EMPTY_GROUND_TRUTH);
  CHECK(miou_iou(none, none, &v) == MIOU_ERR_BOTH_EMPTY);
  miou_mask* wide = nullptr;
  REQUIRE(miou_mask_create(4, 3, nullptr, &wide) == MIOU_OK);
  v = 42;
  CHECK(miou_iou(gt, wide, &v) == MIOU_ERR_DIMENSION_MISMATCH);
  CHECK(v == 42);
  CHECK(std::string(miou_last_error()).size() > 0);

  miou_mask* c = nullptr;
  CHECK(miou_contour(gt, &c) == MIOU_OK);
  CHECK(miou_mask_pixel_count(c) == 4);
  miou_mask* d = nullptr;
  CHECK(miou_downsample(gt, 2, &d) == MIOU_OK);
  CHECK(miou_mask_width(d) == 2);
  CHECK(miou_mask_pixel_count(d) == 1);

  for (miou_mask* m : {gt, dt, none, wide, c, d}) miou_mask_destroy(m);
}

TEST_CASE("c api: fractal dimension") {
  std::vector<std::uint8_t> data(512 * 512, 1);
  miou_mask* full = make(512, 512, data);
  double dim = 0, r2 = 0;
  std::uint64_t counts[10];
  CHECK(miou_fractal_dimension(full, nullptr, 0, MIOU_FRACTAL_AREA, &dim, &r2, counts) == MIOU_OK);
  CHECK(std::abs(dim - 2.0) <= 0.05);
  CHECK(counts[0] == 512u * 512u);
  CHECK(counts[9] == 1);
  CHECK(miou_fractal_dimension(full, nullptr, 0, static_cast<miou_fractal_mode>(5), &dim, &r2,
                               counts) == MIOU_ERR_INVALID_ARGUMENT);
  miou_mask_destroy(full);
}

TEST_CASE("c api: reports") {
  miou_mask* gt = make(2, 2, {1, 1, 0, 0});
  miou_mask* dt = make(2, 2, {1, 0, 0, 0});
  char* text = nullptr;
  CHECK(miou_evaluate_pair(gt, dt, nullptr, 0, 0, "x", MIOU_REPORT_JSON, &text) == MIOU_OK);
  const auto j = nlohmann::json::parse(take(text));
  CHECK(j["pair_id"] == "x");
  CHECK(j["iou"].get<double>() == 0.5);
  CHECK(j["precision"].get<double>() == 1.0);
  CHECK(miou_evaluate_pair(gt, dt, nullptr, 0, 1, "x", MIOU_REPORT_CSV, &text) == MIOU_OK);
  const std::string csv = take(text);
  CHECK(csv.rfind("pair_id,iou,", 0) == 0);
  CHECK(csv.find("\nx,0.5,1,0.5,") != std::string::npos);
  miou_mask_destroy(gt);
  miou_mask_destroy(dt);
}

TEST_CASE("c api: files and directories") {
  const fs::path root = tmp_dir("capi");
  fs::create_directories(root / "gt");
  fs::create_directories(root / "dt");
  miou_mask* a = make(3, 2, {1, 1, 0, 0, 1, 1});
  CHECK(miou_mask_save(a, (root / "gt" / "a.png").c_str(), MIOU_FORMAT_AUTO) == MIOU_OK);
  CHECK(miou_mask_save(a, (root / "dt" / "a.png").c_str(), MIOU_FORMAT_PNG) == MIOU_OK);
  CHECK(miou_mask_save(a, (root / "gt" / "b.txt").c_str(), MIOU_FORMAT_AUTO) == MIOU_OK);
  CHECK(miou_mask_save(a, "/nonexistent-dir/a.png", MIOU_FORMAT_AUTO) ==
        MIOU_ERR_UNWRITABLE_DESTINATION);

  miou_mask* back = nullptr;
  CHECK(miou_mask_load((root / "gt" / "b.txt").c_str(), MIOU_FORMAT_AUTO, -1, &back) == MIOU_OK);
  CHECK(miou_mask_pixel_count(back) == 4);
  miou_mask_destroy(back);
  CHECK(miou_mask_load("/nonexistent-dir/a.png", MIOU_FORMAT_AUTO, -1, &back) ==
        MIOU_ERR_UNREADABLE_FILE);

  std::ofstream(root / "c.json") << R"({"images": [{"id": 1, "width": 4, "height": 4}],
    "annotations": [{"id": 5, "image_id": 1, "category_id": 1,
                     "segmentation": {"size": [4, 4], "counts": "abc"}}]})";
  CHECK(miou_mask_load((root / "c.json").c_str(), MIOU_FORMAT_AUTO, 5, &back) ==
        MIOU_ERR_UNSUPPORTED_ENCODING);

  char* csv = nullptr;
  char* unmatched = nullptr;
  CHECK(miou_evaluate_directories((root / "gt").c_str(), (root / "dt").c_str(), nullptr, 0, 1, 2,
                                  &csv, &unmatched) == MIOU_OK);
  const std::string table = take(csv);
  CHECK(table.find("\na.png,1,1,1,1,1,inf,1,") != std::string::npos);
  CHECK(take(unmatched) == "b.txt\n");
  miou_mask_destroy(a);
}

TEST_CASE("c api: experiments") {
  char* csv = nullptr;
  CHECK(miou_run_grid_experiment(R"({"rows": ["identity"], "sigmas": [0, 3]})", &csv) == MIOU_OK);
  const std::string grid = take(csv);
  CHECK(grid.rfind("row,col,iou,", 0) == 0);
  CHECK(grid.find("\n0,0,1,1,1,1,1,1\n") != std::string::npos);
  CHECK(miou_run_grid_experiment(R"({"bogus": 1})", &csv) == MIOU_ERR_INVALID_ARGUMENT);
  CHECK(miou_run_grid_experiment("{", &csv) == MIOU_ERR_MALFORMED_FORMAT);

  CHECK(miou_run_distribution_experiment(
            R"({"masks_per_category": 4, "categories": ["ellipse"], "width": 80, "height": 80})",
            &csv) == MIOU_OK);
  const std::string dist = take(csv);
  CHECK(dist.find("rigid,ellipse,iou,4,") != std::string::npos);
  CHECK(dist.find("smooth,ellipse,miou,4,") != std::string::npos);

  const fs::path dir = tmp_dir("capi_grid");
  CHECK(miou_write_variant_grid(R"({"rows": ["identity"], "sigmas": [0]})", dir.c_str()) == MIOU_OK);
  CHECK(fs::exists(dir / "manifest.json"));
}
