// File formats and visualizations.
//
// PNM: binary P5 (gray) and P6 (RGB), maxval 255 or 65535, 16-bit samples
// big-endian. Samples map to [0, 1] by q / maxval; writing rounds half to even.
//
// .flo: float32 magic 202021.25, int32 width and height, then interleaved
// (u, v) float32 samples row-major. Always little-endian.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adareg/grid.hpp"

namespace adareg {

/// 8-bit image, channels interleaved (1 = gray, 3 = RGB).
struct ByteImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> data;

  friend bool operator==(const ByteImage&, const ByteImage&) = default;
};

/// Decoded PNM: one channel for P5, three for P6, values in [0, 1].
struct PnmImage {
  int maxval = 255;
  std::vector<ScalarGrid> channels;
};

PnmImage decode_pnm(const std::string& bytes);
std::string encode_pnm(const std::vector<ScalarGrid>& channels, int maxval = 255);
std::string encode_pnm(const ByteImage& image);

PnmImage read_pnm_image(const std::string& path);

/// Gray image; an RGB file is converted with Rec. 601 luma weights.
ScalarGrid read_pnm(const std::string& path);
void write_pnm(const std::string& path, const ScalarGrid& g, int maxval = 255);
void write_pnm(const std::string& path, const std::vector<ScalarGrid>& channels, int maxval = 255);
void write_pnm(const std::string& path, const ByteImage& image);

ScalarGrid to_gray(const PnmImage& image);

/// Label maps are stored as P5 with the raw sample value as the label.
LabelMap read_label_pnm(const std::string& path);
void write_label_pnm(const std::string& path, const LabelMap& labels);

VectorGrid decode_flo(const std::string& bytes);
std::string encode_flo(const VectorGrid& u);
VectorGrid read_flo(const std::string& path);
void write_flo(const std::string& path, const VectorGrid& u);

/// The 55-entry Middlebury color wheel, RGB in 0..255.
const std::vector<std::array<int, 3>>& color_wheel();

/// Middlebury color coding. Vectors are divided by max_magnitude, or by the
/// 99th-percentile magnitude of the field when absent (1 if that is 0).
/// Zero flow is white; non-finite vectors are black.
ByteImage flow_to_color(const VectorGrid& u, std::optional<double> max_magnitude = {});

/// Affine map [lo, hi] -> [0, 255], clamped and rounded half to even.
ByteImage grayscale_heatmap(const ScalarGrid& u, double lo, double hi);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace adareg
