#include "adareg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace adareg {

double psnr(const ScalarGrid& u, const ScalarGrid& ref) {
  require_same_shape(u, ref, "psnr");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += (u[i] - ref[i]) * (u[i] - ref[i]);
  const double mse = acc / static_cast<double>(u.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

// Valid-region separable filtering with the normalized 11-tap Gaussian.
std::vector<double> filter_valid(const std::vector<double>& img, int w, int h,
                                 const std::vector<double>& k) {
  const int ow = w - kSsimWindow + 1, oh = h - kSsimWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i)
        acc += k[static_cast<std::size_t>(i)] * img[static_cast<std::size_t>(y) * w + x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i)
        acc += k[static_cast<std::size_t>(i)] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double ssim(const ScalarGrid& u, const ScalarGrid& ref) {
  require_same_shape(u, ref, "ssim");
  const int w = u.width(), h = u.height();
  if (w < kSsimWindow || h < kSsimWindow)
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");

  std::vector<double> k(kSsimWindow);
  double total = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    total += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= total;

  const std::size_t n = u.size();
  std::vector<double> a(n), b(n), aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = u[i];
    b[i] = ref[i];
    aa[i] = u[i] * u[i];
    bb[i] = ref[i] * ref[i];
    ab[i] = u[i] * ref[i];
  }
  const auto ma = filter_valid(a, w, h, k), mb = filter_valid(b, w, h, k);
  const auto maa = filter_valid(aa, w, h, k), mbb = filter_valid(bb, w, h, k);
  const auto mab = filter_valid(ab, w, h, k);

  constexpr double c1 = (0.01 * 1.0) * (0.01 * 1.0);
  constexpr double c2 = (0.03 * 1.0) * (0.03 * 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const double va = maa[i] - ma[i] * ma[i];
    const double vb = mbb[i] - mb[i] * mb[i];
    const double cov = mab[i] - ma[i] * mb[i];
    acc += ((2.0 * ma[i] * mb[i] + c1) * (2.0 * cov + c2)) /
           ((ma[i] * ma[i] + mb[i] * mb[i] + c1) * (va + vb + c2));
  }
  return acc / static_cast<double>(ma.size());
}

namespace {

struct Overlap {
  std::map<std::pair<int, int>, long> joint;
  std::map<int, long> pred_count, gt_count;
};

Overlap count_overlap(const LabelMap& pred, const LabelMap& gt) {
  require_same_shape(pred, gt, "label metrics");
  Overlap o;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++o.joint[{pred[i], gt[i]}];
    ++o.pred_count[pred[i]];
    ++o.gt_count[gt[i]];
  }
  return o;
}

LabelMatching greedy_match(const Overlap& o) {
  // Candidates ordered by descending overlap, then ascending (pred, gt).
  std::vector<std::tuple<long, int, int>> cand;
  for (const auto& [p, pc] : o.pred_count)
    for (const auto& [g, gc] : o.gt_count) {
      auto it = o.joint.find({p, g});
      cand.emplace_back(it == o.joint.end() ? 0 : it->second, p, g);
    }
  std::sort(cand.begin(), cand.end(), [](const auto& l, const auto& r) {
    if (std::get<0>(l) != std::get<0>(r)) return std::get<0>(l) > std::get<0>(r);
    return std::make_pair(std::get<1>(l), std::get<2>(l)) <
           std::make_pair(std::get<1>(r), std::get<2>(r));
  });
  LabelMatching m;
  std::set<int> used_gt;
  const std::size_t target = std::min(o.pred_count.size(), o.gt_count.size());
  for (const auto& [count, p, g] : cand) {
    if (m.pred_to_gt.size() == target) break;
    if (m.pred_to_gt.contains(p) || used_gt.contains(g)) continue;
    m.pred_to_gt[p] = g;
    used_gt.insert(g);
  }
  return m;
}

}  // namespace

LabelMatching match_labels(const LabelMap& pred, const LabelMap& gt) {
  return greedy_match(count_overlap(pred, gt));
}

LabelScores label_scores(const LabelMap& pred, const LabelMap& gt) {
  const Overlap o = count_overlap(pred, gt);
  const LabelMatching m = greedy_match(o);
  long correct = 0, pred_total = 0, gt_total = 0;
  for (const auto& [p, g] : m.pred_to_gt) {
    auto it = o.joint.find({p, g});
    if (it != o.joint.end()) correct += it->second;
    pred_total += o.pred_count.at(p);
    gt_total += o.gt_count.at(g);
  }
  LabelScores s;
  s.precision = pred_total > 0 ? static_cast<double>(correct) / static_cast<double>(pred_total) : 0.0;
  s.recall = gt_total > 0 ? static_cast<double>(correct) / static_cast<double>(gt_total) : 0.0;
  s.f_measure = s.precision + s.recall > 0.0
                    ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                    : 0.0;
  return s;
}

double label_accuracy(const LabelMap& pred, const LabelMap& gt) {
  const LabelMatching m = match_labels(pred, gt);
  long correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    auto it = m.pred_to_gt.find(pred[i]);
    if (it != m.pred_to_gt.end() && it->second == gt[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

double aee(const VectorGrid& u, const VectorGrid& gt) {
  require_same_shape(u, gt, "aee");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    acc += std::hypot(u[i][0] - gt[i][0], u[i][1] - gt[i][1]);
  return acc / static_cast<double>(u.size());
}

double aae(const VectorGrid& u, const VectorGrid& gt) {
  require_same_shape(u, gt, "aae");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double num = u[i][0] * gt[i][0] + u[i][1] * gt[i][1] + 1.0;
    const double den = std::sqrt(u[i][0] * u[i][0] + u[i][1] * u[i][1] + 1.0) *
                       std::sqrt(gt[i][0] * gt[i][0] + gt[i][1] * gt[i][1] + 1.0);
    acc += std::acos(std::clamp(num / den, -1.0, 1.0));
  }
  return acc / static_cast<double>(u.size());
}

void write_metrics_csv(std::ostream& os,
                       const std::vector<std::pair<std::string, double>>& rows) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(17) << "metric,value\n";
  for (const auto& [name, value] : rows) out << name << ',' << value << '\n';
  os << out.str();
}

}  // namespace adareg
