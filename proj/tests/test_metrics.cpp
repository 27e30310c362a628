#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "adareg/metrics.hpp"
#include "support.hpp"

using namespace adareg;

namespace {

// SSIM by explicit 2-D windows, one position at a time.
double ssim_direct(const ScalarGrid& a, const ScalarGrid& b) {
  double w[11][11], total = 0.0;
  for (int j = 0; j < 11; ++j)
    for (int i = 0; i < 11; ++i) {
      w[j][i] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2.0 * 1.5 * 1.5));
      total += w[j][i];
    }
  const double c1 = 1e-4, c2 = 9e-4;
  double acc = 0.0;
  int count = 0;
  for (int y = 0; y + 11 <= a.height(); ++y)
    for (int x = 0; x + 11 <= a.width(); ++x) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int j = 0; j < 11; ++j)
        for (int i = 0; i < 11; ++i) {
          const double k = w[j][i] / total, va = a(x + i, y + j), vb = b(x + i, y + j);
          ma += k * va, mb += k * vb, saa += k * va * va, sbb += k * vb * vb, sab += k * va * vb;
        }
      const double vara = saa - ma * ma, varb = sbb - mb * mb, cov = sab - ma * mb;
      acc += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (vara + varb + c2));
      ++count;
    }
  return acc / count;
}

}  // namespace

TEST_CASE("psnr") {
  const ScalarGrid ref(8, 8, 0.0);
  CHECK(psnr(ScalarGrid(8, 8, 0.1), ref) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(std::isinf(psnr(ref, ref)));
  CHECK_THROWS_AS(psnr(ScalarGrid(8, 7), ref), std::invalid_argument);
}

TEST_CASE("ssim matches a direct windowed computation") {
  std::mt19937_64 rng(71);
  const ScalarGrid a = testing::random_grid(19, 14, rng, 0.0, 1.0);
  ScalarGrid b = a;
  for (double& v : b.values()) v = 0.8 * v + 0.1 * std::uniform_real_distribution<double>(0, 1)(rng);
  CHECK(ssim(a, b) == doctest::Approx(ssim_direct(a, b)).epsilon(1e-12));
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-14));
  CHECK_THROWS_AS(ssim(ScalarGrid(10, 20), ScalarGrid(10, 20)), std::invalid_argument);
}

TEST_CASE("label scores on a hand-counted 4x4 case") {
  LabelMap gt(4, 4), pred(4, 4);
  const int rows[4][4] = {{5, 7, 7, 7}, {5, 5, 7, 7}, {5, 5, 5, 9}, {5, 5, 5, 7}};
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      gt(x, y) = x < 2 ? 0 : 1;
      pred(x, y) = rows[y][x];
    }
  const LabelMatching m = match_labels(pred, gt);
  REQUIRE(m.pred_to_gt.size() == 2);
  CHECK(m.pred_to_gt.at(5) == 0);
  CHECK(m.pred_to_gt.at(7) == 1);
  const LabelScores s = label_scores(pred, gt);
  CHECK(s.precision == doctest::Approx(12.0 / 15.0));
  CHECK(s.recall == doctest::Approx(12.0 / 16.0));
  CHECK(s.f_measure == doctest::Approx(2 * 0.8 * 0.75 / 1.55));
  CHECK(label_accuracy(pred, gt) == doctest::Approx(0.75));
}

TEST_CASE("label scores are invariant to label renaming") {
  LabelMap gt(6, 6);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x) gt(x, y) = (x / 2 + y / 3) % 3;
  LabelMap renamed = gt;
  for (int& l : renamed.values()) l = 10 - l;
  const LabelScores s = label_scores(renamed, gt);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(label_accuracy(renamed, gt) == 1.0);
  const LabelScores self = label_scores(gt, gt);
  CHECK(self.f_measure == 1.0);
}

TEST_CASE("flow errors") {
  const VectorGrid zero(3, 3), one(3, 3, {1.0, 0.0});
  CHECK(aee(one, zero) == 1.0);
  CHECK(aee(VectorGrid(3, 3, {3.0, 4.0}), zero) == doctest::Approx(5.0));
  CHECK(aae(one, zero) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(aae(one, one) <= 1e-7);
}

TEST_CASE("metrics CSV") {
  std::ostringstream os;
  write_metrics_csv(os, {{"psnr", 20.5}, {"ssim", 0.25}});
  CHECK(os.str() == "metric,value\npsnr,20.5\nssim,0.25\n");
}

TEST_CASE("symmetric metrics are symmetric and ssim(u, u) is exactly one") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarGrid a = testing::random_grid(16, 13, rng, 0.0, 1.0);
    const ScalarGrid b = testing::random_grid(16, 13, rng, 0.0, 1.0);
    CHECK(psnr(a, b) == psnr(b, a));
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-14));
    CHECK(ssim(a, a) == 1.0);
    const VectorGrid p = testing::random_field(9, 7, rng), q = testing::random_field(9, 7, rng);
    CHECK(aee(p, q) == aee(q, p));
    CHECK(aae(p, q) == doctest::Approx(aae(q, p)).epsilon(1e-14));
  }
}

TEST_CASE("psnr strictly decreases as the error grows") {
  const ScalarGrid ref(6, 6, 0.5);
  double previous = psnr(ScalarGrid(6, 6, 0.501), ref);
  for (int i = 2; i <= 40; ++i) {
    const double current = psnr(ScalarGrid(6, 6, 0.5 + 0.001 * i), ref);
    CHECK(current < previous);
    previous = current;
  }
}
