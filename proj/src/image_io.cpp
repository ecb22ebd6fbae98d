#include "dir/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace dir {

namespace {

// Skips PGM whitespace and '#' comment lines, then parses one nonnegative int.
int next_pnm_int(std::istream& in, const std::string& what) {
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = in.get();
  }
  if (ch == EOF || !std::isdigit(ch)) throw IoError("corrupt PGM header: missing " + what);
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > std::numeric_limits<int>::max()) throw IoError("corrupt PGM header: " + what);
    ch = in.get();
  }
  return static_cast<int>(value);
}

GrayImage load_pgm(std::istream& in, bool binary) {
  const int width = next_pnm_int(in, "width");
  const int height = next_pnm_int(in, "height");
  const int maxval = next_pnm_int(in, "maxval");
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    throw IoError("corrupt PGM header: bad dimensions or maxval");
  }
  GrayImage img(width, height);
  const double inv = 1.0 / maxval;
  if (!binary) {
    for (double& s : img.samples) {
      s = next_pnm_int(in, "pixel") * inv;
      if (s > 1.0) throw IoError("corrupt PGM payload: sample exceeds maxval");
    }
    return img;
  }
  // P5: single whitespace already consumed by maxval parse loop
  const int bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> row(static_cast<size_t>(width) * bytes_per);
  for (int y = 0; y < height; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (in.gcount() != static_cast<std::streamsize>(row.size())) {
      throw IoError("corrupt PGM payload: truncated data");
    }
    for (int x = 0; x < width; ++x) {
      const int value = bytes_per == 1 ? row[x] : (row[2 * x] << 8) | row[2 * x + 1];
      if (value > maxval) throw IoError("corrupt PGM payload: sample exceeds maxval");
      img.at(x, y) = value * inv;
    }
  }
  return img;
}

GrayImage load_png(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (fp == nullptr) throw IoError("cannot open file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png != nullptr ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    if (png != nullptr) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError("libpng initialization failed");
  }
  std::vector<png_bytep> row_ptrs;
  std::vector<png_byte> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError("corrupt PNG file: " + path);
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError("unsupported PNG layout (expected gray or RGB): " + path);
  }

  const size_t row_bytes = png_get_rowbytes(png, info);
  pixels.resize(row_bytes * height);
  row_ptrs.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = pixels.data() + y * row_bytes;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  GrayImage img(static_cast<int>(width), static_cast<int>(height));
  const double inv = out_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const png_byte* row = pixels.data() + y * row_bytes;
    for (png_uint_32 x = 0; x < width; ++x) {
      double value;
      if (channels == 1) {
        value = out_depth == 16 ? ((row[2 * x] << 8) | row[2 * x + 1]) * inv : row[x] * inv;
      } else {
        double r, g, b;
        if (out_depth == 16) {
          r = ((row[6 * x] << 8) | row[6 * x + 1]) * inv;
          g = ((row[6 * x + 2] << 8) | row[6 * x + 3]) * inv;
          b = ((row[6 * x + 4] << 8) | row[6 * x + 5]) * inv;
        } else {
          r = row[3 * x] * inv;
          g = row[3 * x + 1] * inv;
          b = row[3 * x + 2] * inv;
        }
        value = 0.299 * r + 0.587 * g + 0.114 * b; // BT.601 luma
      }
      img.at(static_cast<int>(x), static_cast<int>(y)) = value;
    }
  }
  return img;
}

} // namespace

GrayImage load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  unsigned char magic[8] = {0};
  in.read(reinterpret_cast<char*>(magic), 8);
  if (in.gcount() < 2) throw IoError("unreadable or empty file: " + path);

  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (in.gcount() == 8 && std::memcmp(magic, png_sig, 8) == 0) return load_png(path);

  if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
    in.clear();
    in.seekg(2);
    return load_pgm(in, magic[1] == '5');
  }
  throw IoError("unsupported image format (expected PGM P2/P5 or PNG): " + path);
}

void save_pgm_mask(const std::string& path, const ByteMat& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "P5\n" << mask.cols << " " << mask.rows << "\n255\n";
  std::vector<unsigned char> row(mask.cols);
  for (int y = 0; y < mask.rows; ++y) {
    for (int x = 0; x < mask.cols; ++x) row[x] = mask(y, x) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("write failed: " + path);
}

void save_pgm16(const std::string& path, const DMat& map) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : map.data) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "P5\n" << map.cols << " " << map.rows << "\n65535\n";
  std::vector<unsigned char> row(static_cast<size_t>(map.cols) * 2);
  for (int y = 0; y < map.rows; ++y) {
    for (int x = 0; x < map.cols; ++x) {
      const double v = map(y, x);
      const int q = std::isfinite(v)
                        ? static_cast<int>(std::lround((v - lo) * scale))
                        : 65535;
      row[2 * x] = static_cast<unsigned char>((q >> 8) & 0xFF);
      row[2 * x + 1] = static_cast<unsigned char>(q & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("write failed: " + path);
}

void save_pgm_image(const std::string& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  std::vector<unsigned char> row(image.width);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      row[x] = static_cast<unsigned char>(
          std::clamp(std::lround(image.at(x, y) * 255.0), 0L, 255L));
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("write failed: " + path);
}

} // namespace dir
