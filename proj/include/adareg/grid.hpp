// Dense 2-D fields and the finite-difference operators shared by all solvers.
//
// Discretization: forward-difference gradient, backward-difference divergence
// chosen as its negative adjoint, Neumann (replicate) boundary. With this pair
//
//     <grad u, p> = -<u, div p>        and      laplacian = div(grad(.))
//
// hold exactly for every grid size.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adareg {

using Vec2 = std::array<double, 2>;

/// Boundary handling for the differential operators. Only one rule exists;
/// the type marks the extension point.
enum class BoundaryRule { NeumannReplicate };

class ScalarGrid {
public:
  ScalarGrid() = default;
  ScalarGrid(int width, int height, double fill = 0.0);
  ScalarGrid(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int x, int y) { return data_[index(x, y)]; }
  double operator()(int x, int y) const { return data_[index(x, y)]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const ScalarGrid& o) const {
    return width_ == o.width_ && height_ == o.height_;
  }

  friend bool operator==(const ScalarGrid&, const ScalarGrid&) = default;

private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

class VectorGrid {
public:
  VectorGrid() = default;
  VectorGrid(int width, int height, Vec2 fill = {0.0, 0.0});

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  Vec2& operator()(int x, int y) { return data_[index(x, y)]; }
  const Vec2& operator()(int x, int y) const { return data_[index(x, y)]; }
  Vec2& operator[](std::size_t i) { return data_[i]; }
  const Vec2& operator[](std::size_t i) const { return data_[i]; }

  std::span<Vec2> values() { return data_; }
  std::span<const Vec2> values() const { return data_; }

  bool same_shape(const VectorGrid& o) const {
    return width_ == o.width_ && height_ == o.height_;
  }
  bool same_shape(const ScalarGrid& o) const {
    return width_ == o.width() && height_ == o.height();
  }

  /// Component 0 or 1 as a scalar field.
  ScalarGrid component(int c) const;
  void set_component(int c, const ScalarGrid& g);

  friend bool operator==(const VectorGrid&, const VectorGrid&) = default;

private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<Vec2> data_;
};

/// Integer label per pixel (segmentation output or ground truth).
class LabelMap {
public:
  LabelMap() = default;
  LabelMap(int width, int height, int fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  int& operator()(int x, int y) { return data_[index(x, y)]; }
  int operator()(int x, int y) const { return data_[index(x, y)]; }
  int& operator[](std::size_t i) { return data_[i]; }
  int operator[](std::size_t i) const { return data_[i]; }

  std::span<int> values() { return data_; }
  std::span<const int> values() const { return data_; }

  /// 1 + largest label (0 for an empty map).
  int label_count() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<int> data_;
};

/// Throws std::invalid_argument unless both grids have the same shape.
template <class A, class B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

/// Forward differences; the difference across the last column/row is 0.
VectorGrid gradient(const ScalarGrid& u);

/// Negative adjoint of gradient().
ScalarGrid divergence(const VectorGrid& p);

/// divergence(gradient(u)), evaluated through the same code path.
ScalarGrid laplacian(const ScalarGrid& u);

/// Central differences (one-sided at the border). Used to linearize image
/// data for optical flow, never for the regularizer.
VectorGrid central_gradient(const ScalarGrid& u);

/// Normalized, truncated (radius ceil(3 sigma)) discrete Gaussian, length
/// 2*radius+1. sigma == 0 yields the single tap {1}.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian smoothing, mirrored (half-sample symmetric) boundary so
/// constants and the mean are preserved. sigma == 0 is the identity.
ScalarGrid convolve_gaussian(const ScalarGrid& u, double sigma);

/// Bilinear sample with coordinates clamped to the domain.
double sample_bilinear(const ScalarGrid& f, double x, double y);

/// out(x) = f(x + scale * displacement(x)), bilinear, clamped at the border.
ScalarGrid warp_bilinear(const ScalarGrid& f, const VectorGrid& displacement,
                         double scale);

// Small pointwise helpers used throughout the solvers.
double dot(const ScalarGrid& a, const ScalarGrid& b);
double dot(const VectorGrid& a, const VectorGrid& b);
double norm(const ScalarGrid& a);
double norm(const VectorGrid& a);
double mean(const ScalarGrid& a);
double min_value(const ScalarGrid& a);
double max_value(const ScalarGrid& a);
bool all_finite(const ScalarGrid& a);
bool all_finite(const VectorGrid& a);

}  // namespace adareg
