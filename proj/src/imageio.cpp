#include "adareg/imageio.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace adareg {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

namespace {

class HeaderReader {
public:
  explicit HeaderReader(const std::string& b) : b_(b) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      const char c = b_[pos_];
      if (c == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int integer(const char* what) {
    skip_space_and_comments();
    long v = 0;
    std::size_t start = pos_;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      v = v * 10 + (b_[pos_] - '0');
      if (v > 1'000'000'000) throw std::runtime_error(std::string("pnm: ") + what + " too large");
      ++pos_;
    }
    if (pos_ == start) throw std::runtime_error(std::string("pnm: malformed header (") + what + ")");
    return static_cast<int>(v);
  }

  std::size_t pos_ = 0;

private:
  const std::string& b_;
};

std::uint16_t quantize(double v, int maxval) {
  const double c = std::clamp(std::isnan(v) ? 0.0 : v, 0.0, 1.0);
  return static_cast<std::uint16_t>(std::nearbyint(c * maxval));
}

}  // namespace

PnmImage decode_pnm(const std::string& b) {
  if (b.size() < 2 || b[0] != 'P' || (b[1] != '5' && b[1] != '6'))
    throw std::runtime_error("pnm: unsupported magic (expected P5 or P6)");
  const int channels = b[1] == '5' ? 1 : 3;
  HeaderReader hr(b);
  hr.pos_ = 2;
  const int w = hr.integer("width");
  const int h = hr.integer("height");
  const int maxval = hr.integer("maxval");
  if (w <= 0 || h <= 0) throw std::runtime_error("pnm: dimensions must be positive");
  if (maxval != 255 && maxval != 65535)
    throw std::runtime_error("pnm: maxval must be 255 or 65535");
  if (hr.pos_ >= b.size() || !std::isspace(static_cast<unsigned char>(b[hr.pos_])))
    throw std::runtime_error("pnm: malformed header (missing whitespace after maxval)");
  std::size_t pos = hr.pos_ + 1;
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
                           static_cast<std::size_t>(channels) * bytes_per;
  if (b.size() - pos < need) throw std::runtime_error("pnm: truncated payload");

  PnmImage img;
  img.maxval = maxval;
  img.channels.assign(static_cast<std::size_t>(channels), ScalarGrid(w, h));
  for (std::size_t i = 0; i < static_cast<std::size_t>(w) * static_cast<std::size_t>(h); ++i)
    for (std::size_t c = 0; c < static_cast<std::size_t>(channels); ++c) {
      unsigned q = static_cast<unsigned char>(b[pos++]);
      if (bytes_per == 2) q = (q << 8) | static_cast<unsigned char>(b[pos++]);
      img.channels[c][i] = static_cast<double>(q) / maxval;
    }
  return img;
}

std::string encode_pnm(const std::vector<ScalarGrid>& channels, int maxval) {
  if (channels.size() != 1 && channels.size() != 3)
    throw std::invalid_argument("pnm: need 1 or 3 channels");
  if (maxval != 255 && maxval != 65535)
    throw std::invalid_argument("pnm: maxval must be 255 or 65535");
  for (const auto& c : channels) require_same_shape(c, channels.front(), "encode_pnm");
  const int w = channels.front().width(), h = channels.front().height();
  std::string out = (channels.size() == 1 ? "P5\n" : "P6\n") + std::to_string(w) + " " +
                    std::to_string(h) + "\n" + std::to_string(maxval) + "\n";
  for (std::size_t i = 0; i < channels.front().size(); ++i)
    for (const auto& c : channels) {
      const std::uint16_t q = quantize(c[i], maxval);
      if (maxval > 255) out.push_back(static_cast<char>(q >> 8));
      out.push_back(static_cast<char>(q & 0xff));
    }
  return out;
}

std::string encode_pnm(const ByteImage& image) {
  if (image.channels != 1 && image.channels != 3)
    throw std::invalid_argument("pnm: need 1 or 3 channels");
  std::string out = (image.channels == 1 ? "P5\n" : "P6\n") + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.data.data()), image.data.size());
  return out;
}

PnmImage read_pnm_image(const std::string& path) {
  try {
    return decode_pnm(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

ScalarGrid to_gray(const PnmImage& image) {
  if (image.channels.size() == 1) return image.channels.front();
  ScalarGrid g = image.channels[0];
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = 0.299 * image.channels[0][i] + 0.587 * image.channels[1][i] +
           0.114 * image.channels[2][i];
  return g;
}

ScalarGrid read_pnm(const std::string& path) { return to_gray(read_pnm_image(path)); }

void write_pnm(const std::string& path, const ScalarGrid& g, int maxval) {
  write_file(path, encode_pnm(std::vector<ScalarGrid>{g}, maxval));
}

void write_pnm(const std::string& path, const std::vector<ScalarGrid>& channels, int maxval) {
  write_file(path, encode_pnm(channels, maxval));
}

void write_pnm(const std::string& path, const ByteImage& image) {
  write_file(path, encode_pnm(image));
}

LabelMap read_label_pnm(const std::string& path) {
  const PnmImage img = read_pnm_image(path);
  if (img.channels.size() != 1) throw std::runtime_error(path + ": label map must be P5");
  const ScalarGrid& g = img.channels.front();
  LabelMap labels(g.width(), g.height());
  for (std::size_t i = 0; i < g.size(); ++i)
    labels[i] = static_cast<int>(std::nearbyint(g[i] * img.maxval));
  return labels;
}

void write_label_pnm(const std::string& path, const LabelMap& labels) {
  ByteImage img{labels.width(), labels.height(), 1, {}};
  img.data.reserve(labels.size());
  for (int l : labels.values()) {
    if (l < 0 || l > 255) throw std::invalid_argument("label out of the 0..255 range");
    img.data.push_back(static_cast<std::uint8_t>(l));
  }
  write_pnm(path, img);
}

namespace {

constexpr float kFloMagic = 202021.25f;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& b, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + static_cast<std::size_t>(i)]))
         << (8 * i);
  return v;
}

}  // namespace

VectorGrid decode_flo(const std::string& b) {
  if (b.size() < 12 || std::bit_cast<float>(get_u32(b, 0)) != kFloMagic)
    throw std::runtime_error("not a flow file");
  const auto w = static_cast<std::int32_t>(get_u32(b, 4));
  const auto h = static_cast<std::int32_t>(get_u32(b, 8));
  if (w <= 0 || h <= 0 || w > (1 << 20) || h > (1 << 20))
    throw std::runtime_error("flo: invalid dimensions");
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (b.size() - 12 < 8 * n) throw std::runtime_error("flo: truncated payload");
  VectorGrid u(w, h);
  std::size_t pos = 12;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < 2; ++c, pos += 4)
      u[i][c] = std::bit_cast<float>(get_u32(b, pos));
  return u;
}

std::string encode_flo(const VectorGrid& u) {
  std::string out;
  out.reserve(12 + 8 * u.size());
  put_u32(out, std::bit_cast<std::uint32_t>(kFloMagic));
  put_u32(out, static_cast<std::uint32_t>(u.width()));
  put_u32(out, static_cast<std::uint32_t>(u.height()));
  for (const Vec2& v : u.values())
    for (double c : v) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(c)));
  return out;
}

VectorGrid read_flo(const std::string& path) {
  try {
    return decode_flo(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_flo(const std::string& path, const VectorGrid& u) { write_file(path, encode_flo(u)); }

const std::vector<std::array<int, 3>>& color_wheel() {
  static const std::vector<std::array<int, 3>> wheel = [] {
    constexpr int RY = 15, YG = 6, GC = 4, CB = 11, BM = 13, MR = 6;
    std::vector<std::array<int, 3>> w;
    for (int i = 0; i < RY; ++i) w.push_back({255, 255 * i / RY, 0});
    for (int i = 0; i < YG; ++i) w.push_back({255 - 255 * i / YG, 255, 0});
    for (int i = 0; i < GC; ++i) w.push_back({0, 255, 255 * i / GC});
    for (int i = 0; i < CB; ++i) w.push_back({0, 255 - 255 * i / CB, 255});
    for (int i = 0; i < BM; ++i) w.push_back({255 * i / BM, 0, 255});
    for (int i = 0; i < MR; ++i) w.push_back({255, 0, 255 - 255 * i / MR});
    return w;
  }();
  return wheel;
}

ByteImage flow_to_color(const VectorGrid& u, std::optional<double> max_magnitude) {
  double scale = 1.0;
  if (max_magnitude) {
    if (!(*max_magnitude > 0.0)) throw std::invalid_argument("max_magnitude must be positive");
    scale = *max_magnitude;
  } else {
    std::vector<double> mags;
    mags.reserve(u.size());
    for (const Vec2& v : u.values())
      if (std::isfinite(v[0]) && std::isfinite(v[1])) mags.push_back(std::hypot(v[0], v[1]));
    if (!mags.empty()) {
      const auto k = static_cast<std::size_t>(0.99 * static_cast<double>(mags.size() - 1));
      std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end());
      if (mags[k] > 0.0) scale = mags[k];
    }
  }

  const auto& wheel = color_wheel();
  const int ncols = static_cast<int>(wheel.size());
  ByteImage img{u.width(), u.height(), 3, std::vector<std::uint8_t>(3 * u.size(), 0)};
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i][0]) || !std::isfinite(u[i][1])) continue;
    const double fx = u[i][0] / scale, fy = u[i][1] / scale;
    const double rad = std::sqrt(fx * fx + fy * fy);
    const double a = std::atan2(-fy, -fx) / std::numbers::pi;
    const double fk = (a + 1.0) / 2.0 * (ncols - 1);
    const int k0 = static_cast<int>(fk);
    const int k1 = (k0 + 1) % ncols;
    const double f = fk - k0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double col0 = wheel[static_cast<std::size_t>(k0)][c] / 255.0;
      const double col1 = wheel[static_cast<std::size_t>(k1)][c] / 255.0;
      double col = (1.0 - f) * col0 + f * col1;
      if (rad <= 1.0)
        col = 1.0 - rad * (1.0 - col);
      else
        col *= 0.75;
      img.data[3 * i + c] = static_cast<std::uint8_t>(255.0 * col);
    }
  }
  return img;
}

ByteImage grayscale_heatmap(const ScalarGrid& u, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("heatmap range requires lo < hi");
  ByteImage img{u.width(), u.height(), 1, std::vector<std::uint8_t>(u.size())};
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = std::clamp((u[i] - lo) / (hi - lo) * 255.0, 0.0, 255.0);
    img.data[i] = static_cast<std::uint8_t>(std::nearbyint(std::isnan(t) ? 0.0 : t));
  }
  return img;
}

}  // namespace adareg
