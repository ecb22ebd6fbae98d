#ifndef DIR_IMGOPS_HPP
#define DIR_IMGOPS_HPP

#include "dir/types.hpp"

#include <cstdint>

namespace dir {

// Bilinear resampling to the requested size (pixel centers at half-integers).
GrayImage resize_bilinear(const GrayImage& image, int new_width, int new_height);

// Counterclockwise rotation about (cx, cy) with bilinear sampling; samples
// falling outside the source keep `fill`.
GrayImage rotate_bilinear(const GrayImage& image, double cx, double cy, double angle,
                          double fill = 0.0);

// Grid-exact 90-degree steps (quarters counterclockwise) about the pixel-corner
// point (c, c) of a square image; exact permutations of the samples.
GrayImage rotate90(const GrayImage& image, int quarters);

GrayImage flip_rows(const GrayImage& image); // vertical flip (y -> H - 1 - y)
GrayImage flip_cols(const GrayImage& image); // horizontal flip (x -> W - 1 - x)

// 2x2 block average, halving each dimension (even dims required).
GrayImage downscale2(const GrayImage& image);

GrayImage gaussian_blur(const GrayImage& image, double sigma);

GrayImage add_gaussian_noise(const GrayImage& image, double sigma, uint64_t seed);

// Binary morphology with a disk structuring element.
ByteMat dilate_disk(const ByteMat& mask, int radius);
ByteMat erode_disk(const ByteMat& mask, int radius);
ByteMat open_disk(const ByteMat& mask, int radius);
ByteMat close_disk(const ByteMat& mask, int radius);

} // namespace dir

#endif
