// Quality measures: PSNR, SSIM, label precision/recall, flow endpoint and
// angular error.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "adareg/grid.hpp"

namespace adareg {

/// 10 log10(1 / MSE) for unit dynamic range; +infinity when MSE == 0.
double psnr(const ScalarGrid& u, const ScalarGrid& ref);

/// Mean SSIM over all positions of an 11x11 Gaussian window (sigma 1.5) that
/// fit inside the image; K1 = 0.01, K2 = 0.03, L = 1. Images must be at least
/// 11x11.
double ssim(const ScalarGrid& u, const ScalarGrid& ref);

/// Injective predicted -> ground-truth label correspondence.
struct LabelMatching {
  std::map<int, int> pred_to_gt;
};

/// Greedy matching: repeatedly pair the unmatched (pred, gt) labels with the
/// largest overlap until min(#pred, #gt) labels are matched. Ties go to the
/// smaller predicted, then ground-truth, label.
LabelMatching match_labels(const LabelMap& pred, const LabelMap& gt);

struct LabelScores {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

LabelScores label_scores(const LabelMap& pred, const LabelMap& gt);

/// Fraction of pixels whose predicted label maps onto their ground-truth
/// label under match_labels().
double label_accuracy(const LabelMap& pred, const LabelMap& gt);

double aee(const VectorGrid& u, const VectorGrid& gt);

/// Mean angle (radians) between (u1, u2, 1) and (g1, g2, 1).
double aae(const VectorGrid& u, const VectorGrid& gt);

/// Writes `metric,value` with a header line.
void write_metrics_csv(std::ostream& os,
                       const std::vector<std::pair<std::string, double>>& rows);

}  // namespace adareg
