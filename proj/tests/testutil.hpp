#ifndef DIR_TESTS_TESTUTIL_HPP
#define DIR_TESTS_TESTUTIL_HPP

#include "dir/imgops.hpp"
#include "dir/types.hpp"

#include <cmath>
#include <random>

namespace dir::testutil {

inline GrayImage random_image(int width, int height, uint64_t seed) {
  GrayImage img(width, height);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (double& s : img.samples) s = uni(rng);
  return img;
}

// Band-limited texture: blurred noise rescaled to [lo, hi]. Smooth enough for
// resampling-based geometric checks while keeping energy at the probed scales.
inline GrayImage textured_image(int width, int height, uint64_t seed, double sigma = 2.0,
                                double lo = 0.1, double hi = 0.9) {
  GrayImage img = gaussian_blur(random_image(width, height, seed), sigma);
  double mn = img.samples[0], mx = img.samples[0];
  for (double s : img.samples) {
    mn = std::min(mn, s);
    mx = std::max(mx, s);
  }
  const double scale = mx > mn ? (hi - lo) / (mx - mn) : 0.0;
  for (double& s : img.samples) s = lo + (s - mn) * scale;
  return img;
}

// Zeroes samples outside the disk of radius `radius` about the pixel-corner
// point (c, c); keeps rotations/flips of the patch grid-exact and
// disk-supported.
inline GrayImage disk_mask(const GrayImage& img, double c, double radius, double fill = 0.0) {
  GrayImage out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double dx = x + 0.5 - c, dy = y + 0.5 - c;
      if (dx * dx + dy * dy > radius * radius) out.at(x, y) = fill;
    }
  }
  return out;
}

inline void paste(GrayImage& canvas, const GrayImage& patch, int x0, int y0) {
  for (int y = 0; y < patch.height; ++y) {
    for (int x = 0; x < patch.width; ++x) {
      if (canvas.in_bounds(x0 + x, y0 + y)) canvas.at(x0 + x, y0 + y) = patch.at(x, y);
    }
  }
}

inline GrayImage crop(const GrayImage& img, int x0, int y0, int w, int h) {
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
  }
  return out;
}

// --- synthetic detection scene -----------------------------------------

// Blocky glyphs on a flat background; the template glyph has no rotational
// or mirror symmetry so instance transforms are distinguishable.
inline GrayImage glyph_patch(char which, int side = 48, double bg = 0.25, double fg = 0.85) {
  GrayImage patch(side, side, bg);
  auto bar = [&](int x0, int y0, int w, int h) {
    for (int y = y0; y < y0 + h; ++y) {
      for (int x = x0; x < x0 + w; ++x) {
        if (patch.in_bounds(x, y)) patch.at(x, y) = fg;
      }
    }
  };
  const int u = side / 8; // glyph stroke unit
  switch (which) {
    case 'F':
      bar(2 * u, u, u, 6 * u);          // spine
      bar(3 * u, u, 3 * u, u);          // top arm
      bar(3 * u, 3 * u, 2 * u, u);      // middle arm
      break;
    case 'T':
      bar(u, u, 6 * u, u);
      bar(3 * u + u / 2, 2 * u, u, 5 * u);
      break;
    case '+':
      bar(3 * u + u / 2, u, u, 6 * u);
      bar(u, 3 * u + u / 2, 6 * u, u);
      break;
    case 'o': // ring
      for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
          const double r = std::hypot(x + 0.5 - side / 2.0, y + 0.5 - side / 2.0);
          if (r >= 1.5 * u && r <= 3 * u) patch.at(x, y) = fg;
        }
      }
      break;
    case '#':
      bar(2 * u, u, u, 6 * u);
      bar(5 * u, u, u, 6 * u);
      bar(u, 2 * u, 6 * u, u);
      bar(u, 5 * u, 6 * u, u);
      break;
    default:
      bar(2 * u, 2 * u, 4 * u, 4 * u); // solid square
  }
  return patch;
}

struct LetterScene {
  GrayImage image;
  GrayImage tmpl;                        // the clean template patch
  std::vector<std::pair<int, int>> instance_centers;
  std::vector<std::pair<int, int>> distractor_centers;
};

// Five template instances (identity, 90deg, 180deg, column flip, row flip)
// among four distractor glyphs on a flat background.
inline LetterScene make_letter_scene() {
  LetterScene scene;
  const int side = 48;
  scene.tmpl = glyph_patch('F', side);
  scene.image = GrayImage(320, 320, 0.25);

  const GrayImage variants[5] = {scene.tmpl, rotate90(scene.tmpl, 1), rotate90(scene.tmpl, 2),
                                 flip_cols(scene.tmpl), flip_rows(scene.tmpl)};
  const std::pair<int, int> at[5] = {{16, 16}, {140, 24}, {250, 60}, {40, 150}, {200, 200}};
  for (int i = 0; i < 5; ++i) {
    paste(scene.image, variants[i], at[i].first, at[i].second);
    scene.instance_centers.emplace_back(at[i].first + side / 2, at[i].second + side / 2);
  }

  const char kinds[4] = {'T', '+', 'o', '#'};
  const std::pair<int, int> dat[4] = {{130, 130}, {16, 250}, {120, 250}, {250, 150}};
  for (int i = 0; i < 4; ++i) {
    paste(scene.image, glyph_patch(kinds[i], side), dat[i].first, dat[i].second);
    scene.distractor_centers.emplace_back(dat[i].first + side / 2, dat[i].second + side / 2);
  }
  return scene;
}

// Luma-plane JPEG round trip at the given quality: 8x8 block DCT, scaled
// Annex-K luminance quantization, inverse DCT. Matches what a real encoder
// does to a grayscale image minus the lossless entropy stage.
inline GrayImage jpeg_roundtrip(const GrayImage& img, int quality) {
  static const int base_table[64] = {
      16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
      14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
      18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
      49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  int qtable[64];
  for (int i = 0; i < 64; ++i) {
    qtable[i] = std::clamp((base_table[i] * scale + 50) / 100, 1, 255);
  }

  double cosines[8][8];
  for (int u = 0; u < 8; ++u) {
    for (int x = 0; x < 8; ++x) cosines[u][x] = std::cos((2 * x + 1) * u * kPi / 16.0);
  }
  auto cu = [](int u) { return u == 0 ? 1.0 / std::sqrt(2.0) : 1.0; };

  GrayImage out(img.width, img.height);
  for (int by = 0; by < img.height; by += 8) {
    for (int bx = 0; bx < img.width; bx += 8) {
      double block[8][8];
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          const int sx = std::min(bx + x, img.width - 1);
          const int sy = std::min(by + y, img.height - 1);
          block[y][x] = img.at(sx, sy) * 255.0 - 128.0;
        }
      }
      double coef[8][8];
      for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 8; ++u) {
          double acc = 0.0;
          for (int y = 0; y < 8; ++y) {
            for (int x = 0; x < 8; ++x) acc += block[y][x] * cosines[u][x] * cosines[v][y];
          }
          const double q = qtable[v * 8 + u];
          coef[v][u] = std::round(0.25 * cu(u) * cu(v) * acc / q) * q;
        }
      }
      for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
          double acc = 0.0;
          for (int v = 0; v < 8; ++v) {
            for (int u = 0; u < 8; ++u) {
              acc += cu(u) * cu(v) * coef[v][u] * cosines[u][x] * cosines[v][y];
            }
          }
          const int ox = bx + x, oy = by + y;
          if (ox < img.width && oy < img.height) {
            out.at(ox, oy) = std::clamp((0.25 * acc + 128.0) / 255.0, 0.0, 1.0);
          }
        }
      }
    }
  }
  return out;
}

} // namespace dir::testutil

#endif
