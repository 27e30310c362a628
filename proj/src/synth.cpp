#include "adareg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace adareg {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double SplitMix64::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

LabeledImage junction_image(int n_regions, int size, double disc_radius_frac,
                            std::uint64_t seed, double noise_sigma) {
  if (n_regions < 3) throw std::invalid_argument("junction needs at least 3 regions");
  if (size < 1) throw std::invalid_argument("size must be positive");
  const int sectors = n_regions - 1;

  std::vector<double> levels(static_cast<std::size_t>(n_regions));
  for (int j = 0; j < n_regions; ++j) levels[static_cast<std::size_t>(j)] = 0.1 + 0.8 * j / (n_regions - 1);
  const int mid = (n_regions - 1) / 2;
  const double disc_level = levels[static_cast<std::size_t>(mid)];
  levels.erase(levels.begin() + mid);
  // Interleave dark and bright so that neighboring sectors contrast.
  std::vector<double> sector_level;
  const std::size_t half = (levels.size() + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    sector_level.push_back(levels[i]);
    if (half + i < levels.size()) sector_level.push_back(levels[half + i]);
  }

  LabeledImage out{ScalarGrid(size, size), LabelMap(size, size)};
  const double c = 0.5 * size;
  const double radius = disc_radius_frac * size;
  const double wedge = 2.0 * std::numbers::pi / sectors;
  SplitMix64 rng(seed);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - c, dy = y + 0.5 - c;
      int label;
      if (std::hypot(dx, dy) < radius) {
        label = sectors;
      } else {
        const double a = std::atan2(dy, dx) + std::numbers::pi;
        label = std::min(static_cast<int>(a / wedge), sectors - 1);
      }
      out.labels(x, y) = label;
      double v = label == sectors ? disc_level : sector_level[static_cast<std::size_t>(label)];
      if (noise_sigma > 0.0) v = clamp01(v + noise_sigma * rng.gaussian());
      out.image(x, y) = v;
    }
  return out;
}

LabeledImage noisy_rectangles(int size, const std::array<double, 4>& noise_levels,
                              std::uint64_t seed) {
  if (size < 8) throw std::invalid_argument("rectangles fixture needs size >= 8");
  for (double s : noise_levels)
    if (!(s >= 0.0)) throw std::invalid_argument("noise levels must be nonnegative");
  // Rectangle extents as fractions of the canvas: [x0, x1) x [y0, y1).
  constexpr std::array<std::array<double, 4>, 3> rects{{
      {0.06, 0.30, 0.20, 0.80},
      {0.38, 0.62, 0.20, 0.80},
      {0.70, 0.94, 0.20, 0.80},
  }};
  LabeledImage out{ScalarGrid(size, size), LabelMap(size, size)};
  SplitMix64 rng(seed);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double fx = (x + 0.5) / size, fy = (y + 0.5) / size;
      int label = 0;
      for (int k = 0; k < 3; ++k) {
        const auto& r = rects[static_cast<std::size_t>(k)];
        if (fx >= r[0] && fx < r[1] && fy >= r[2] && fy < r[3]) label = k + 1;
      }
      const auto li = static_cast<std::size_t>(label);
      out.labels(x, y) = label;
      out.image(x, y) = clamp01(kRectangleLevels[li] + noise_levels[li] * rng.gaussian());
    }
  return out;
}

LabeledImage two_region_image(int size, double bg, double fg, double noise_sigma,
                              std::uint64_t seed) {
  LabeledImage out{ScalarGrid(size, size), LabelMap(size, size)};
  SplitMix64 rng(seed);
  const int lo = size / 4, hi = lo + size / 2;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const bool inside = x >= lo && x < hi && y >= lo && y < hi;
      out.labels(x, y) = inside ? 1 : 0;
      out.image(x, y) = clamp01((inside ? fg : bg) + noise_sigma * rng.gaussian());
    }
  return out;
}

BiasProfile parse_bias_profile(const std::string& name) {
  if (name == "half") return BiasProfile::Half;
  if (name == "radial") return BiasProfile::Radial;
  throw std::invalid_argument("unknown bias profile '" + name + "'");
}

double bias_sigma(BiasProfile profile, double sigma_max, int x, int y, int width, int height) {
  if (profile == BiasProfile::Half) {
    const double t = width > 1 ? static_cast<double>(x) / (width - 1) : 0.0;
    return sigma_max * std::clamp(4.0 * (t - 0.5), 0.0, 1.0);
  }
  const double cx = 0.5 * (width - 1), cy = 0.5 * (height - 1);
  const double rmax = std::hypot(cx, cy);
  return rmax > 0.0 ? sigma_max * std::hypot(x - cx, y - cy) / rmax : 0.0;
}

ScalarGrid biased_noise_image(const ScalarGrid& clean, double sigma_max, BiasProfile profile,
                              std::uint64_t seed) {
  if (!(sigma_max >= 0.0)) throw std::invalid_argument("sigma_max must be nonnegative");
  ScalarGrid out = clean;
  if (sigma_max == 0.0) return out;
  SplitMix64 rng(seed);
  const int w = clean.width(), h = clean.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double n = rng.gaussian();
      out(x, y) = clamp01(clean(x, y) + bias_sigma(profile, sigma_max, x, y, w, h) * n);
    }
  return out;
}

ScalarGrid test_pattern(int size) {
  ScalarGrid g(size, size);
  const double s = size;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double fx = (x + 0.5) / s, fy = (y + 0.5) / s;
      double v = 0.25 + 0.2 * fy;
      if (std::hypot(fx - 0.3, fy - 0.35) < 0.18) v = 0.75;
      if (fx > 0.55 && fx < 0.9 && fy > 0.15 && fy < 0.3) v = 0.9;
      if (fx > 0.6 && fx < 0.85 && fy > 0.55 && fy < 0.85) v = 0.1;
      if (fx > 0.12 && fx < 0.45 && fy > 0.7 && fy < 0.78) v = 0.6;
      g(x, y) = v;
    }
  return g;
}

ScalarGrid smooth_texture(int size, double smoothing_sigma, std::uint64_t seed) {
  ScalarGrid noise(size, size);
  SplitMix64 rng(seed);
  for (double& v : noise.values()) v = rng.gaussian();
  ScalarGrid t = convolve_gaussian(noise, smoothing_sigma);
  const double lo = min_value(t), hi = max_value(t);
  const double span = hi > lo ? hi - lo : 1.0;
  for (double& v : t.values()) v = 0.1 + 0.8 * (v - lo) / span;
  return t;
}

FlowPair shifted_pair(const ScalarGrid& base, const Vec2& shift) {
  const VectorGrid d(base.width(), base.height(), shift);
  return {base, warp_bilinear(base, d, 1.0), d};
}

}  // namespace adareg
