#ifndef DIR_TYPES_HPP
#define DIR_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dir {

using Cpx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Dense row-major matrix. rows/cols are fixed at construction; storage is
// contiguous so FFT and serialization code can touch .data directly.
template <typename T>
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  Mat() = default;
  Mat(int r, int c, T fill = T{}) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  T& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  const T& operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  size_t size() const { return data.size(); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

using CMat = Mat<Cpx>;
using DMat = Mat<double>;
using ByteMat = Mat<uint8_t>;

// Grayscale image, samples in [0,1], row-major. width = number of columns
// (x axis), height = number of rows (y axis).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> samples;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0)
      : width(w), height(h), samples(static_cast<size_t>(w) * h, fill) {}

  double at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
  double& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }

  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

} // namespace dir

#endif
