#ifndef DIR_IMAGE_IO_HPP
#define DIR_IMAGE_IO_HPP

#include "dir/types.hpp"

#include <string>

namespace dir {

// I/O failures (missing file, unsupported format, corrupt header or payload).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads PGM (P2/P5, maxval up to 65535) or PNG (8/16-bit gray or RGB; RGB is
// converted with BT.601 luma). Samples are normalized to [0,1].
GrayImage load_image(const std::string& path);

// P5 output, maxval 255; mask entries are written as 0/255.
void save_pgm_mask(const std::string& path, const ByteMat& mask);

// 16-bit P5 output after min-max normalization (for distance/offset maps).
void save_pgm16(const std::string& path, const DMat& map);

// 8-bit P5 output of [0,1] samples.
void save_pgm_image(const std::string& path, const GrayImage& image);

} // namespace dir

#endif
