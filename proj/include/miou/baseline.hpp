#pragma once

#include "miou/mask.hpp"

namespace miou {

// Pixel-area overlap metrics. Every function throws DimensionMismatch when the
// frames differ.

// |gt ∩ dt| / |gt ∪ dt|. Throws BothEmpty when the union is empty.
double iou(const Mask& gt, const Mask& dt);

struct PrecisionRecall {
  double precision = 0;
  double recall = 0;
  double f1 = 0;  // 0 when precision + recall == 0
};

// Throws EmptyGroundTruth if gt is empty, EmptyDetection if dt is empty.
PrecisionRecall precision_recall_f1(const Mask& gt, const Mask& dt);

// Sign of a saturated logit: +1 when dsc == 1, -1 when dsc == 0.
enum class Saturation : int { Negative = -1, None = 0, Positive = 1 };

struct DiceLogit {
  double dsc = 0;
  // ln(dsc / (1 - dsc)); ±infinity when saturated.
  double ltd = 0;
  Saturation saturation = Saturation::None;
};

// Throws BothEmpty when |gt| + |dt| == 0.
DiceLogit dsc_ltd(const Mask& gt, const Mask& dt);

struct BaselineReport {
  double iou = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double dsc = 0;
  double ltd = 0;
  Saturation ltd_saturation = Saturation::None;
};

}  // namespace miou
