// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "miou/baseline.hpp"
#include "miou/harness.hpp"
#include "miou/multiscale.hpp"
#include "miou/synth.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
namespace h = miou::harness;
using miou::Frame;
using miou::Mask;
using miou::ScaleSet;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. miou(m,m) and iou(m,m) are exactly 1.
Outcome identity_suite() {
  std::mt19937_64 rng(2024);
  std::vector<Mask> masks;
  while (masks.size() < 100) {
    const auto w = static_cast<std::uint32_t>(1 + rng() % 300);
    const auto hgt = static_cast<std::uint32_t>(1 + rng() % 300);
    Mask m = oracle::random_mask(rng, w, hgt, 0.01 + (rng() % 99) / 100.0);
    if (!m.empty()) masks.push_back(std::move(m));
  }
  for (std::uint64_t i = 0; i < 100; ++i) {
    miou::synth::JaggedShapeParams p;
    p.seed = i + 1;
    p.base_radius = 20 + static_cast<double>(rng() % 60);
    p.tooth_amplitude = static_cast<double>(rng() % 40);
    p.tooth_count = static_cast<std::uint32_t>(3 + rng() % 40);
    masks.push_back(miou::synth::generate_jagged(p));
  }
  int bad = 0;
  for (const auto& m : masks) {
    if (miou::miou(m, m).miou != 1.0) ++bad;
    if (miou::iou(m, m) != 1.0) ++bad;
  }
  return {bad == 0, std::to_string(masks.size()) + " masks, " + std::to_string(bad) + " mismatches"};
}

// 2. Every 3x3 mask against 50 random partners, r checked against cell
// enumeration.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(7);
  long compared = 0, bad = 0, undefined = 0;
  for (int a = 0; a < 512; ++a) {
    std::vector<std::uint8_t> ga(9);
    for (int i = 0; i < 9; ++i) ga[i] = (a >> i) & 1;
    const Mask gt(Frame{3, 3}, ga);
    const auto gg = oracle::to_grid(gt);
    for (int k = 0; k < 50; ++k) {
      std::vector<std::uint8_t> gb(9);
      const int b = static_cast<int>(rng() % 512);
      for (int i = 0; i < 9; ++i) gb[i] = (b >> i) & 1;
      const Mask dt(Frame{3, 3}, gb);
      const auto gd = oracle::to_grid(dt);
      for (std::uint32_t d : {1u, 2u, 3u}) {
        const double expect = oracle::ratio(gg, gd, static_cast<int>(d));
        if (expect < 0) {
          try {
            miou::intersection_ratio(gt, dt, d);
            ++bad;
          } catch (const miou::Error& e) {
            if (e.code() != miou::ErrorCode::EmptyGroundTruth) ++bad;
          }
          ++undefined;
          continue;
        }
        if (miou::intersection_ratio(gt, dt, d) != expect) ++bad;
        ++compared;
      }
    }
  }
  return {bad == 0, std::to_string(compared) + " ratios compared, " + std::to_string(undefined) +
                        " empty-gt cases raised, " + std::to_string(bad) + " mismatches"};
}

// 3. Box and comb detections with equal IoU but different MIoU.
Outcome box_versus_comb() {
  const auto cmp = miou::synth::comb_comparison({});
  const double iou_box = miou::iou(cmp.gt, cmp.box);
  const double iou_comb = miou::iou(cmp.gt, cmp.comb);
  const auto pr_box = miou::precision_recall_f1(cmp.gt, cmp.box);
  const auto pr_comb = miou::precision_recall_f1(cmp.gt, cmp.comb);
  const double m_box = miou::miou(cmp.gt, cmp.box).miou;
  const double m_comb = miou::miou(cmp.gt, cmp.comb).miou;
  const double gap = std::abs(iou_box - iou_comb);
  const bool baselines_tie = std::abs(pr_box.precision - pr_comb.precision) < 1e-9 &&
                             std::abs(pr_box.recall - pr_comb.recall) < 1e-9 &&
                             std::abs(pr_box.f1 - pr_comb.f1) < 1e-9;
  std::string d = "iou " + fmt("%.6f", iou_box) + " vs " + fmt("%.6f", iou_comb) + ", miou box " +
                  fmt("%.4f", m_box) + " comb " + fmt("%.4f", m_comb) + ", depth " +
                  std::to_string(cmp.matched_depth);
  return {gap < 1e-9 && baselines_tie && m_comb - m_box > 0.05, d};
}

// 4. Default 4x7 grid: MIoU decreases along each row and varies more than IoU.
Outcome grid_pattern() {
  const auto rows = h::run_grid_experiment(h::GridConfig{});
  const std::size_t n_rows = h::GridConfig{}.rows.size();
  const std::size_t n_cols = h::GridConfig{}.sigmas.size();
  bool ok = rows.size() == 28 && n_rows == 4 && n_cols == 7;
  std::string d;
  for (std::size_t r = 0; r < n_rows && ok; ++r) {
    int strict = 0;
    bool monotone = true;
    double mlo = 2, mhi = -1, ilo = 2, ihi = -1;
    for (std::size_t c = 0; c < n_cols; ++c) {
      const auto& rep = rows[r * n_cols + c].report;
      const double m = rep.miou.value;
      const double j = rep.iou.value;
      mlo = std::min(mlo, m);
      mhi = std::max(mhi, m);
      ilo = std::min(ilo, j);
      ihi = std::max(ihi, j);
      if (c > 0) {
        const double prev = rows[r * n_cols + c - 1].report.miou.value;
        if (m > prev) monotone = false;
        if (m < prev) ++strict;
      }
    }
    const bool row_ok = monotone && strict >= 5 && (mhi - mlo) > (ihi - ilo);
    ok = ok && row_ok;
    d += "row " + std::to_string(r) + ": " + std::to_string(strict) + " drops, range " +
         fmt("%.3f", mhi - mlo) + " vs " + fmt("%.3f", ihi - ilo) + (row_ok ? "" : " (bad)") +
         (r + 1 < n_rows ? "; " : "");
  }
  return {ok, d};
}

// 5. Distributions per category: rigid IQR(miou) < IQR(iou), smooth
// median(miou) <= median(iou).
Outcome distributions() {
  h::DistributionConfig config;
  config.masks_per_category = 100;
  const auto masks = h::collect_masks(config);
  const auto rows = h::run_distribution_config(config);
  bool ok = !rows.empty();
  std::string d = std::to_string(masks.size()) + " masks per group";
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    const auto& a = rows[i];      // iou
    const auto& b = rows[i + 1];  // miou
    bool row_ok = a.metric == "iou" && b.metric == "miou" && a.category == b.category &&
                  a.n >= 100 && b.n >= 100;
    if (a.group == h::Group::Rigid) {
      row_ok = row_ok && (b.q3 - b.q1) < (a.q3 - a.q1);
      d += "; rigid " + a.category + " IQR " + fmt("%.3f", b.q3 - b.q1) + " < " +
           fmt("%.3f", a.q3 - a.q1);
    } else {
      row_ok = row_ok && b.median <= a.median;
      d += "; smooth " + a.category + " median " + fmt("%.4f", b.median) + " <= " +
           fmt("%.4f", a.median);
    }
    if (!row_ok) d += " (bad)";
    ok = ok && row_ok;
  }
  return {ok && rows.size() == 4 * config.categories.size(), d};
}

// 6. Box-counting dimension of a line, a filled square and a Sierpinski
// triangle.
Outcome fractal_sanity() {
  // The segment starts on a cell boundary; an unaligned start adds a partial
  // cell at every coarse scale and drags the slope below 1.
  Mask line(512, 512);
  for (std::uint32_t x = 0; x < 256; ++x) line.set(x, 300, true);
  const double d_line = miou::fractal_dimension(line, ScaleSet::powers_of_two(0, 8)).dimension;
  const double d_square = miou::fractal_dimension(miou::complement(Mask(512, 512)),
                                                  ScaleSet::default_set(), miou::FractalMode::Area)
                              .dimension;
  const double d_sierpinski = miou::fractal_dimension(oracle::sierpinski(),
                                                      ScaleSet::powers_of_two(0, 7),
                                                      miou::FractalMode::Area)
                                  .dimension;
  const double target = std::log(3.0) / std::log(2.0);
  const bool ok = std::abs(d_line - 1.0) <= 0.05 && std::abs(d_square - 2.0) <= 0.05 &&
                  std::abs(d_sierpinski - target) <= 0.1;
  return {ok, "line " + fmt("%.4f", d_line) + ", square " + fmt("%.4f", d_square) +
                  ", sierpinski " + fmt("%.4f", d_sierpinski) + " (target " +
                  fmt("%.4f", target) + ")"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 7. Two CLI runs of the grid experiment produce identical bytes.
Outcome cli_determinism(const std::string& cli, const fs::path& work) {
  fs::create_directories(work);
  const fs::path config = work / "grid.json";
  std::ofstream(config) << R"({"seed": 17, "threads": 0})" << "\n";
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    const fs::path out = work / ("grid_run" + std::to_string(run) + ".csv");
    fs::remove(out);
    const std::string cmd = "\"" + cli + "\" experiment grid --config \"" + config.string() +
                            "\" --out \"" + out.string() + "\"";
    if (std::system(cmd.c_str()) != 0) return {false, "cli exited nonzero: " + cmd};
    outputs.push_back(slurp(out));
  }
  const bool ok = !outputs[0].empty() && outputs[0] == outputs[1];
  return {ok, std::to_string(outputs[0].size()) + " bytes per run, " +
                  (ok ? "identical" : "different")};
}

// 8. One 512x512 contour-mode pair over the default scales in under 50 ms.
Outcome performance(double& ms_out) {
  miou::synth::JaggedShapeParams p;
  p.frame = Frame{512, 512};
  p.center = {256, 256};
  p.base_radius = 150;
  p.tooth_amplitude = 60;
  p.tooth_count = 48;
  const Mask gt = miou::synth::generate_jagged(p);
  const Mask dt = miou::synth::apply_perturbation(gt, miou::synth::PerturbationSpec::rotate(4));
  std::vector<double> times;
  double sink = 0;
  for (int i = 0; i < 7; ++i) {
    const auto t0 = Clock::now();
    sink += miou::miou(gt, dt, ScaleSet::default_set(), true).miou;
    times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  std::sort(times.begin(), times.end());
  const double median = times[times.size() / 2];
  ms_out = median;

  const auto t0 = Clock::now();
  const auto report = h::evaluate_pair(gt, dt);
  const double full = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return {median < 50.0 && sink > 0 && report.miou.ok(),
          "miou median " + fmt("%.2f", median) + " ms over 7 runs (full report " +
              fmt("%.2f", full) + " ms)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string cli;
  std::string work = "acceptance_work";
  app.add_option("--cli", cli, "Path to the miou executable")->required();
  app.add_option("--work", work, "Scratch directory");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime limit
    std::function<Outcome()> run;
  };
  double perf_ms = 0;
  const std::vector<Criterion> criteria{
      {1, "identity suite", 10, identity_suite},
      {2, "oracle equivalence on 3x3 masks", 30, oracle_equivalence},
      {3, "equal-IoU box vs comb detections", 5, box_versus_comb},
      {4, "variant grid decreasing pattern", 60, grid_pattern},
      {5, "perturbation distributions", 120, distributions},
      {6, "fractal dimension sanity", 10, fractal_sanity},
      {7, "grid experiment determinism", 0, [&] { return cli_determinism(cli, work); }},
      {8, "512x512 contour pair under 50 ms", 0, [&] { return performance(perf_ms); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = c.limit_s == 0 || secs < c.limit_s;
    const bool pass = o.ok && in_time;
    failures += !pass;
    std::string timing = fmt("%.2f s", secs);
    if (c.limit_s > 0) timing += fmt(" / limit %.0f s", c.limit_s);
    std::printf("%s  %d. %s [%s]: %s\n", pass ? "PASS" : "FAIL", c.id, c.name, timing.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
