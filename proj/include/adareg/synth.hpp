// Deterministic synthetic fixtures.
//
// Noise comes from SplitMix64 + Box-Muller so the same seed reproduces the
// same fixture bit for bit on any platform.
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "adareg/grid.hpp"

namespace adareg {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in (0, 1]: 53 random bits, never 0 so log() is safe.
  double uniform();
  /// Standard normal by Box-Muller; the second variate of each pair is
  /// returned by the following call.
  double gaussian();

private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct LabeledImage {
  ScalarGrid image;
  LabelMap labels;
};

/// n_regions - 1 equal angular sectors around the center plus a central disc
/// of radius disc_radius_frac * size with its own gray level (label
/// n_regions - 1). Gray levels are evenly spaced in [0.1, 0.9]; the disc takes
/// the middle level. Optional additive noise uses the seed.
LabeledImage junction_image(int n_regions, int size, double disc_radius_frac,
                            std::uint64_t seed, double noise_sigma = 0.0);

/// Gray levels of the rectangles fixture: background, left, middle, right.
inline constexpr std::array<double, 4> kRectangleLevels{1.0, 0.1, 0.4, 0.7};

/// White background with three side-by-side rectangles; region k gets
/// additive Gaussian noise of standard deviation noise_levels[k] (background,
/// left, middle, right), clamped to [0, 1]. Labels follow the same order.
LabeledImage noisy_rectangles(int size, const std::array<double, 4>& noise_levels,
                              std::uint64_t seed);

/// Centered square of side size/2 at level `fg` on a `bg` background, plus
/// Gaussian noise.
LabeledImage two_region_image(int size, double bg, double fg, double noise_sigma,
                              std::uint64_t seed);

enum class BiasProfile { Half, Radial };

BiasProfile parse_bias_profile(const std::string& name);

/// Noise standard deviation at (x, y). Half: 0 on the left half, a linear
/// ramp over the next quarter, sigma_max on the last quarter. Radial: grows
/// linearly with the distance from the center, sigma_max at the corners.
double bias_sigma(BiasProfile profile, double sigma_max, int x, int y, int width, int height);

ScalarGrid biased_noise_image(const ScalarGrid& clean, double sigma_max, BiasProfile profile,
                              std::uint64_t seed);

/// Piecewise-smooth test picture: shaded background, a disc, a bright bar and
/// a dark square. Values in [0.1, 0.9].
ScalarGrid test_pattern(int size);

/// Gaussian-smoothed white noise rescaled to [0.1, 0.9]; a textured image
/// with gradients everywhere, used for flow fixtures.
ScalarGrid smooth_texture(int size, double smoothing_sigma, std::uint64_t seed);

struct FlowPair {
  ScalarGrid f1, f2;
  VectorGrid gt_flow;
};

/// f1 = base, f2(x) = base(x + shift) (bilinear, clamped); the ground truth
/// is the constant shift, matching the brightness model f2(x) = f1(x + u).
FlowPair shifted_pair(const ScalarGrid& base, const Vec2& shift);

}  // namespace adareg
