#include "miou/baseline.hpp"

#include <cmath>
#include <limits>

namespace miou {

double iou(const Mask& gt, const Mask& dt) {
  const std::size_t inter = intersection_count(gt, dt);
  const std::size_t uni = gt.pixel_count() + dt.pixel_count() - inter;
  if (uni == 0) throw Error(ErrorCode::BothEmpty, "IoU of two empty masks");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

PrecisionRecall precision_recall_f1(const Mask& gt, const Mask& dt) {
  const std::size_t inter = intersection_count(gt, dt);
  const std::size_t n_gt = gt.pixel_count();
  const std::size_t n_dt = dt.pixel_count();
  if (n_gt == 0) {
    throw Error(ErrorCode::EmptyGroundTruth, "recall needs a nonempty gt");
  }
  if (n_dt == 0) {
    throw Error(ErrorCode::EmptyDetection, "precision needs a nonempty dt");
  }
  PrecisionRecall out;
  out.precision = static_cast<double>(inter) / static_cast<double>(n_dt);
  out.recall = static_cast<double>(inter) / static_cast<double>(n_gt);
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0 ? 2 * out.precision * out.recall / sum : 0.0;
  return out;
}

DiceLogit dsc_ltd(const Mask& gt, const Mask& dt) {
  const std::size_t inter = intersection_count(gt, dt);
  const std::size_t total = gt.pixel_count() + dt.pixel_count();
  if (total == 0) throw Error(ErrorCode::BothEmpty, "DSC of two empty masks");

  DiceLogit out;
  out.dsc = static_cast<double>(2 * inter) / static_cast<double>(total);
  if (2 * inter == total) {
    out.dsc = 1.0;
    out.ltd = std::numeric_limits<double>::infinity();
    out.saturation = Saturation::Positive;
  } else if (inter == 0) {
    out.ltd = -std::numeric_limits<double>::infinity();
    out.saturation = Saturation::Negative;
  } else {
    // dsc / (1 - dsc) == 2|∩| / (|gt| + |dt| - 2|∩|), exact in integers.
    out.ltd = std::log(static_cast<double>(2 * inter) /
                       static_cast<double>(total - 2 * inter));
  }
  return out;
}

}  // namespace miou
