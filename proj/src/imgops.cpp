#include "dir/imgops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dir {

namespace {

// Bilinear sample at continuous coordinates with pixel centers at
// half-integers; reads are clamped to the image border.
double sample_clamped(const GrayImage& img, double xs, double ys) {
  const double gx = xs - 0.5, gy = ys - 0.5;
  int x0 = static_cast<int>(std::floor(gx));
  int y0 = static_cast<int>(std::floor(gy));
  const double tx = gx - x0, ty = gy - y0;
  const auto clampx = [&](int x) { return std::clamp(x, 0, img.width - 1); };
  const auto clampy = [&](int y) { return std::clamp(y, 0, img.height - 1); };
  const double v00 = img.at(clampx(x0), clampy(y0));
  const double v01 = img.at(clampx(x0 + 1), clampy(y0));
  const double v10 = img.at(clampx(x0), clampy(y0 + 1));
  const double v11 = img.at(clampx(x0 + 1), clampy(y0 + 1));
  return v00 * (1 - tx) * (1 - ty) + v01 * tx * (1 - ty) + v10 * (1 - tx) * ty + v11 * tx * ty;
}

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
    }
  }
  return offsets;
}

} // namespace

GrayImage resize_bilinear(const GrayImage& image, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) throw std::invalid_argument("resize: bad target size");
  GrayImage out(new_width, new_height);
  const double sx = static_cast<double>(image.width) / new_width;
  const double sy = static_cast<double>(image.height) / new_height;
  for (int y = 0; y < new_height; ++y) {
    for (int x = 0; x < new_width; ++x) {
      out.at(x, y) = sample_clamped(image, (x + 0.5) * sx, (y + 0.5) * sy);
    }
  }
  return out;
}

GrayImage rotate_bilinear(const GrayImage& image, double cx, double cy, double angle,
                          double fill) {
  GrayImage out(image.width, image.height, fill);
  const double c = std::cos(-angle), s = std::sin(-angle);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      const double xs = cx + c * dx - s * dy;
      const double ys = cy + s * dx + c * dy;
      if (xs < 0.5 || xs > image.width - 0.5 || ys < 0.5 || ys > image.height - 0.5) continue;
      out.at(x, y) = sample_clamped(image, xs, ys);
    }
  }
  return out;
}

GrayImage rotate90(const GrayImage& image, int quarters) {
  if (image.width != image.height) throw std::invalid_argument("rotate90: square images only");
  quarters = ((quarters % 4) + 4) % 4;
  GrayImage cur = image;
  const int W = image.width;
  for (int q = 0; q < quarters; ++q) {
    GrayImage next(W, W);
    for (int y = 0; y < W; ++y) {
      for (int x = 0; x < W; ++x) next.at(x, y) = cur.at(y, W - 1 - x);
    }
    cur = std::move(next);
  }
  return cur;
}

GrayImage flip_rows(const GrayImage& image) {
  GrayImage out(image.width, image.height);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) out.at(x, y) = image.at(x, image.height - 1 - y);
  }
  return out;
}

GrayImage flip_cols(const GrayImage& image) {
  GrayImage out(image.width, image.height);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) out.at(x, y) = image.at(image.width - 1 - x, y);
  }
  return out;
}

GrayImage downscale2(const GrayImage& image) {
  if (image.width % 2 != 0 || image.height % 2 != 0) {
    throw std::invalid_argument("downscale2: even dimensions required");
  }
  GrayImage out(image.width / 2, image.height / 2);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      out.at(x, y) = 0.25 * (image.at(2 * x, 2 * y) + image.at(2 * x + 1, 2 * y) +
                             image.at(2 * x, 2 * y + 1) + image.at(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  if (sigma <= 0.0) return image;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  GrayImage tmp(image.width, image.height);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * image.at(std::clamp(x + i, 0, image.width - 1), y);
      }
      tmp.at(x, y) = acc;
    }
  }
  GrayImage out(image.width, image.height);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * tmp.at(x, std::clamp(y + i, 0, image.height - 1));
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

GrayImage add_gaussian_noise(const GrayImage& image, double sigma, uint64_t seed) {
  GrayImage out = image;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& s : out.samples) s = std::clamp(s + noise(rng), 0.0, 1.0);
  return out;
}

ByteMat dilate_disk(const ByteMat& mask, int radius) {
  const auto offsets = disk_offsets(radius);
  ByteMat out(mask.rows, mask.cols, 0);
  for (int y = 0; y < mask.rows; ++y) {
    for (int x = 0; x < mask.cols; ++x) {
      if (!mask(y, x)) continue;
      for (const auto& [dx, dy] : offsets) {
        const int nx = x + dx, ny = y + dy;
        if (nx >= 0 && nx < mask.cols && ny >= 0 && ny < mask.rows) out(ny, nx) = 1;
      }
    }
  }
  return out;
}

ByteMat erode_disk(const ByteMat& mask, int radius) {
  const auto offsets = disk_offsets(radius);
  ByteMat out(mask.rows, mask.cols, 0);
  for (int y = 0; y < mask.rows; ++y) {
    for (int x = 0; x < mask.cols; ++x) {
      bool all = true;
      for (const auto& [dx, dy] : offsets) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= mask.cols || ny < 0 || ny >= mask.rows || !mask(ny, nx)) {
          all = false;
          break;
        }
      }
      out(y, x) = all ? 1 : 0;
    }
  }
  return out;
}

ByteMat open_disk(const ByteMat& mask, int radius) {
  return dilate_disk(erode_disk(mask, radius), radius);
}

ByteMat close_disk(const ByteMat& mask, int radius) {
  return erode_disk(dilate_disk(mask, radius), radius);
}

} // namespace dir
