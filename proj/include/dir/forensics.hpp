#ifndef DIR_FORENSICS_HPP
#define DIR_FORENSICS_HPP

#include "dir/detect.hpp"
#include "dir/match.hpp"

namespace dir {

// Copy-move forgery detection settings (Cozzolino-style pipeline with DIR
// features).
struct CopyMoveConfig {
  BasisKind kind = BasisKind::PCT;
  OrderNorm norm = OrderNorm::L1;
  int order_bound = 3; // 10-dim PCT features
  std::vector<int> scales = {8, 11, 13, 16, 19, 21, 24, 27, 29, 32};
  PoolMode pooling = PoolMode::Average;
  IntegrationStrategy strategy = IntegrationStrategy::zoa();
  int upsample_long_edge = 2000; // inputs with a shorter long edge are upscaled
  double min_offset = 50.0;      // self-matches shorter than this are excluded
  int consistency_radius = 8;
  double consistency_fraction = 0.5;
  int morph_open_radius = 3;
  int morph_close_radius = 7;
  int match_iterations = 3;

  void validate() const;
  uint32_t config_hash() const;
};

struct ForgeryMask {
  int width = 0;
  int height = 0;
  ByteMat mask; // 1 = flagged pixel
  uint32_t config_hash = 0;
  double runtime_seconds = 0.0;
};

ForgeryMask copymove_detect(const GrayImage& image, const CopyMoveConfig& cfg, uint64_t seed);

// Perceptual-hash settings: stride-sampled grid of pooled 16-dim magnitude
// features, quantized to one byte per component.
struct HashConfig {
  int stride = 8;
  BasisKind kind = BasisKind::PCT;
  OrderNorm norm = OrderNorm::LInf;
  int order_bound = 3; // 16-dim features
  std::vector<int> scales = {8, 10, 12};
  PoolMode pooling = PoolMode::Average;
  IntegrationStrategy strategy = IntegrationStrategy::zoa();

  void validate() const;
  uint32_t config_hash() const;
};

struct HashDigest {
  uint32_t config_hash = 0;
  int grid_cols = 0;
  int grid_rows = 0;
  int dim = 0;
  std::vector<double> range_min;   // per component
  std::vector<double> range_scale; // per component (max - min)
  std::vector<uint8_t> bytes;      // grid_rows * grid_cols * dim, cell-major

  size_t payload_bytes() const { return bytes.size(); }
};

HashDigest phash_generate(const GrayImage& image, const HashConfig& cfg);

struct HashCompareResult {
  DMat dist;        // per-cell Euclidean distance on dequantized features
  ByteMat tampered; // cells above the threshold
  double threshold = 0.0;
};

// Distances thresholded by Otsu's method. When the distance histogram shows
// no usable bimodal separation (all-equal input or between-class variance
// below kOtsuMinEffectiveness of the total), every cell is reported clean.
HashCompareResult phash_compare(const HashDigest& a, const HashDigest& b);

constexpr double kOtsuMinEffectiveness = 0.80;

// 256-bin histogram threshold maximizing the between-class variance; ties go
// to the lowest threshold. Throws std::domain_error when all values coincide.
double otsu_threshold(const std::vector<double>& values);

// Pixel-level precision/recall/F1 ignoring a band of exclude_border pixels
// around the truth edges.
Scores score_mask(const ByteMat& predicted, const ByteMat& truth, int exclude_border);

} // namespace dir

#endif
