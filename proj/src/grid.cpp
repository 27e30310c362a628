#include "adareg/grid.hpp"

#include <algorithm>
#include <cmath>

#include "adareg/parallel.hpp"

namespace adareg {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("grid dimensions must be positive");
}

// Half-sample symmetric extension: -1 -> 0, -2 -> 1, n -> n-1. Keeps the
// smoothing operator symmetric, hence mean preserving.
int reflect(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

}  // namespace

ScalarGrid::ScalarGrid(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

ScalarGrid::ScalarGrid(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("grid data length must equal width*height");
}

VectorGrid::VectorGrid(int width, int height, Vec2 fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

LabelMap::LabelMap(int width, int height, int fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

int LabelMap::label_count() const {
  if (data_.empty()) return 0;
  return *std::max_element(data_.begin(), data_.end()) + 1;
}

ScalarGrid VectorGrid::component(int c) const {
  ScalarGrid out(width_, height_);
  for (std::size_t i = 0; i < data_.size(); ++i) out[i] = data_[i][static_cast<std::size_t>(c)];
  return out;
}

void VectorGrid::set_component(int c, const ScalarGrid& g) {
  require_same_shape(*this, g, "set_component");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i][static_cast<std::size_t>(c)] = g[i];
}

VectorGrid gradient(const ScalarGrid& u) {
  const int w = u.width(), h = u.height();
  VectorGrid g(w, h);
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const double c = u(x, y);
      g(x, y) = {x + 1 < w ? u(x + 1, y) - c : 0.0, y + 1 < h ? u(x, y + 1) - c : 0.0};
    }
  });
  return g;
}

ScalarGrid divergence(const VectorGrid& p) {
  const int w = p.width(), h = p.height();
  ScalarGrid d(w, h);
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      double dx = 0.0, dy = 0.0;
      if (w > 1) {
        if (x == 0)
          dx = p(x, y)[0];
        else if (x == w - 1)
          dx = -p(x - 1, y)[0];
        else
          dx = p(x, y)[0] - p(x - 1, y)[0];
      }
      if (h > 1) {
        if (y == 0)
          dy = p(x, y)[1];
        else if (y == h - 1)
          dy = -p(x, y - 1)[1];
        else
          dy = p(x, y)[1] - p(x, y - 1)[1];
      }
      d(x, y) = dx + dy;
    }
  });
  return d;
}

ScalarGrid laplacian(const ScalarGrid& u) { return divergence(gradient(u)); }

VectorGrid central_gradient(const ScalarGrid& u) {
  const int w = u.width(), h = u.height();
  VectorGrid g(w, h);
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      double gx = 0.0, gy = 0.0;
      if (w > 1) {
        if (x == 0)
          gx = u(1, y) - u(0, y);
        else if (x == w - 1)
          gx = u(x, y) - u(x - 1, y);
        else
          gx = 0.5 * (u(x + 1, y) - u(x - 1, y));
      }
      if (h > 1) {
        if (y == 0)
          gy = u(x, 1) - u(x, 0);
        else if (y == h - 1)
          gy = u(x, y) - u(x, y - 1);
        else
          gy = 0.5 * (u(x, y + 1) - u(x, y - 1));
      }
      g(x, y) = {gx, gy};
    }
  });
  return g;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian sigma must be nonnegative");
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (double& v : k) v /= total;
  return k;
}

ScalarGrid convolve_gaussian(const ScalarGrid& u, double sigma) {
  const auto k = gaussian_kernel(sigma);
  if (k.size() == 1) return u;
  const int radius = static_cast<int>(k.size() / 2);
  const int w = u.width(), h = u.height();

  ScalarGrid tmp(w, h);
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += k[static_cast<std::size_t>(i + radius)] * u(reflect(x + i, w), y);
      tmp(x, y) = acc;
    }
  });
  ScalarGrid out(w, h);
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += k[static_cast<std::size_t>(i + radius)] * tmp(x, reflect(y + i, h));
      out(x, y) = acc;
    }
  });
  return out;
}

double sample_bilinear(const ScalarGrid& f, double x, double y) {
  const int w = f.width(), h = f.height();
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = std::min(static_cast<int>(x), w - 1);
  const int y0 = std::min(static_cast<int>(y), h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ax = x - x0, ay = y - y0;
  const double top = f(x0, y0) + ax * (f(x1, y0) - f(x0, y0));
  const double bottom = f(x0, y1) + ax * (f(x1, y1) - f(x0, y1));
  return top + ay * (bottom - top);
}

ScalarGrid warp_bilinear(const ScalarGrid& f, const VectorGrid& displacement, double scale) {
  require_same_shape(f, displacement, "warp_bilinear");
  const int w = f.width(), h = f.height();
  ScalarGrid out(w, h);
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const Vec2& d = displacement(x, y);
      out(x, y) = sample_bilinear(f, x + scale * d[0], y + scale * d[1]);
    }
  });
  return out;
}

double dot(const ScalarGrid& a, const ScalarGrid& b) {
  require_same_shape(a, b, "dot");
  const int w = a.width();
  return sum_rows(a.height(), [&](int y) {
    double s = 0.0;
    for (int x = 0; x < w; ++x) s += a(x, y) * b(x, y);
    return s;
  });
}

double dot(const VectorGrid& a, const VectorGrid& b) {
  require_same_shape(a, b, "dot");
  const int w = a.width();
  return sum_rows(a.height(), [&](int y) {
    double s = 0.0;
    for (int x = 0; x < w; ++x) s += a(x, y)[0] * b(x, y)[0] + a(x, y)[1] * b(x, y)[1];
    return s;
  });
}

double norm(const ScalarGrid& a) { return std::sqrt(dot(a, a)); }
double norm(const VectorGrid& a) { return std::sqrt(dot(a, a)); }

double mean(const ScalarGrid& a) {
  const int w = a.width();
  const double s = sum_rows(a.height(), [&](int y) {
    double r = 0.0;
    for (int x = 0; x < w; ++x) r += a(x, y);
    return r;
  });
  return s / static_cast<double>(a.size());
}

double min_value(const ScalarGrid& a) {
  return *std::min_element(a.values().begin(), a.values().end());
}

double max_value(const ScalarGrid& a) {
  return *std::max_element(a.values().begin(), a.values().end());
}

bool all_finite(const ScalarGrid& a) {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double v) { return std::isfinite(v); });
}

bool all_finite(const VectorGrid& a) {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](const Vec2& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); });
}

void set_thread_count(int n) {
#ifdef ADAREG_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int thread_count() {
#ifdef ADAREG_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace adareg
