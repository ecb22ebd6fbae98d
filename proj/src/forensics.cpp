#include "dir/forensics.hpp"

#include "dir/fft.hpp"
#include "dir/imgops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace dir {

namespace {

uint32_t fnv1a(uint32_t hash, const void* data, size_t len) {
  const auto* bytes = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 16777619u;
  }
  return hash;
}

template <typename T>
uint32_t fnv1a_value(uint32_t hash, const T& value) {
  return fnv1a(hash, &value, sizeof(T));
}

// Streamed decomposition: one FFT-path scale at a time, magnitudes pooled on
// the fly so the full complex field never has to be resident.
FeatureField pooled_features(const GrayImage& image, BasisKind kind, const OrderSet& orders,
                             const std::vector<int>& scales, IntegrationStrategy strategy,
                             PoolMode pooling) {
  std::vector<int> ws = scales;
  std::sort(ws.begin(), ws.end());
  const int max_w = ws.back();
  const int spec_cols = fftu::good_size(image.width + 2 * max_w);
  const int spec_rows = fftu::good_size(image.height + 2 * max_w);

  CMat padded(spec_rows, spec_cols);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) padded(y, x) = image.at(x, y);
  }
  const CMat img_spec = fftu::fft2(padded);

  FeatureField out;
  out.width = image.width;
  out.height = image.height;
  out.dim = static_cast<int>(orders.pairs.size());
  out.orders = orders.pairs;
  out.scales = ws;
  const size_t n = static_cast<size_t>(out.width) * out.height * out.dim;
  out.data.assign(n, pooling == PoolMode::Max ? -std::numeric_limits<double>::infinity() : 0.0);
  out.valid.assign(static_cast<size_t>(out.width) * out.height, 0);

  for (int w : ws) {
    for (size_t k = 0; k < orders.pairs.size(); ++k) {
      const OrderPair& pair = orders.pairs[k];
      const Kernel kernel = make_kernel(kind, pair.n, pair.m, w, strategy);
      const CMat spec = kernel_spectrum(kernel, spec_cols, spec_rows);
      CMat prod(spec_rows, spec_cols);
      for (size_t i = 0; i < prod.data.size(); ++i) prod.data[i] = img_spec.data[i] * spec.data[i];
      const CMat full = fftu::ifft2(prod);
      for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
          const double mag = std::abs(full(y, x));
          double& slot = out.data[(static_cast<size_t>(y) * out.width + x) * out.dim + k];
          if (pooling == PoolMode::Average) {
            slot += mag;
          } else {
            slot = std::max(slot, mag);
          }
        }
      }
    }
  }
  if (pooling == PoolMode::Average) {
    const double inv = 1.0 / static_cast<double>(ws.size());
    for (double& v : out.data) v *= inv;
  }
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const bool interior =
          x >= max_w && x <= out.width - max_w && y >= max_w && y <= out.height - max_w;
      out.valid[static_cast<size_t>(y) * out.width + x] = interior ? 1 : 0;
    }
  }
  return out;
}

} // namespace

void CopyMoveConfig::validate() const {
  if (scales.empty()) throw std::invalid_argument("copymove: empty scale list");
  for (size_t i = 1; i < scales.size(); ++i) {
    if (scales[i] <= scales[i - 1]) {
      throw std::invalid_argument("copymove: scales must be strictly increasing");
    }
  }
  if (min_offset <= scales.back()) {
    throw std::invalid_argument("copymove: min_offset must exceed the largest scale");
  }
}

uint32_t CopyMoveConfig::config_hash() const {
  uint32_t h = 2166136261u;
  h = fnv1a_value(h, kind);
  h = fnv1a_value(h, norm);
  h = fnv1a_value(h, order_bound);
  for (int w : scales) h = fnv1a_value(h, w);
  h = fnv1a_value(h, pooling);
  h = fnv1a_value(h, strategy.code());
  h = fnv1a_value(h, upsample_long_edge);
  h = fnv1a_value(h, min_offset);
  h = fnv1a_value(h, consistency_radius);
  h = fnv1a_value(h, consistency_fraction);
  h = fnv1a_value(h, morph_open_radius);
  h = fnv1a_value(h, morph_close_radius);
  h = fnv1a_value(h, match_iterations);
  return h;
}

ForgeryMask copymove_detect(const GrayImage& image, const CopyMoveConfig& cfg, uint64_t seed) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  // optional upscale of low-resolution inputs
  GrayImage work = image;
  const int long_edge = std::max(image.width, image.height);
  if (cfg.upsample_long_edge > 0 && long_edge < cfg.upsample_long_edge) {
    const double s = static_cast<double>(cfg.upsample_long_edge) / long_edge;
    work = resize_bilinear(image, static_cast<int>(std::lround(image.width * s)),
                           static_cast<int>(std::lround(image.height * s)));
  }
  const int max_w = cfg.scales.back();
  if (std::min(work.width, work.height) < 2 * max_w) {
    throw std::invalid_argument("copymove: image too small for the configured scales");
  }

  const OrderSet orders = order_set(cfg.kind, cfg.norm, cfg.order_bound);
  const FeatureField features =
      pooled_features(work, cfg.kind, orders, cfg.scales, cfg.strategy, cfg.pooling);

  MatchParams params;
  params.iterations = cfg.match_iterations;
  params.seed = seed;
  params.min_offset = cfg.min_offset;
  const MatchField mf = dense_match(features, features, params);

  // offset-consistency filter: a pixel survives when enough neighbors agree
  // with its offset to within 2 px
  ByteMat kept(work.height, work.width, 0);
  const int cr = cfg.consistency_radius;
  for (int y = 0; y < work.height; ++y) {
    for (int x = 0; x < work.width; ++x) {
      if (!mf.valid(y, x)) continue;
      const int ox = mf.dx(y, x), oy = mf.dy(y, x);
      int neighbors = 0, agree = 0;
      for (int dy = -cr; dy <= cr; ++dy) {
        for (int dx = -cr; dx <= cr; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (dx * dx + dy * dy > cr * cr) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || nx >= work.width || ny < 0 || ny >= work.height) continue;
          if (!mf.valid(ny, nx)) continue;
          ++neighbors;
          const int ddx = mf.dx(ny, nx) - ox;
          const int ddy = mf.dy(ny, nx) - oy;
          if (ddx * ddx + ddy * ddy <= 4) ++agree;
        }
      }
      if (neighbors > 0 && agree >= cfg.consistency_fraction * neighbors) kept(y, x) = 1;
    }
  }

  // mark both ends of each surviving correspondence
  ByteMat marked(work.height, work.width, 0);
  for (int y = 0; y < work.height; ++y) {
    for (int x = 0; x < work.width; ++x) {
      if (!kept(y, x)) continue;
      marked(y, x) = 1;
      const int tx = x + mf.dx(y, x), ty = y + mf.dy(y, x);
      if (tx >= 0 && tx < work.width && ty >= 0 && ty < work.height) marked(ty, tx) = 1;
    }
  }

  ByteMat cleaned = close_disk(open_disk(marked, cfg.morph_open_radius), cfg.morph_close_radius);

  // map back to the original resolution
  ForgeryMask result;
  result.width = image.width;
  result.height = image.height;
  result.mask = ByteMat(image.height, image.width, 0);
  if (work.width == image.width && work.height == image.height) {
    result.mask = std::move(cleaned);
  } else {
    const double sx = static_cast<double>(work.width) / image.width;
    const double sy = static_cast<double>(work.height) / image.height;
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) {
        const int wx = std::min(work.width - 1, static_cast<int>((x + 0.5) * sx));
        const int wy = std::min(work.height - 1, static_cast<int>((y + 0.5) * sy));
        result.mask(y, x) = cleaned(wy, wx);
      }
    }
  }
  result.config_hash = cfg.config_hash();
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

void HashConfig::validate() const {
  if (stride < 1) throw std::invalid_argument("phash: stride must be >= 1");
  if (scales.empty()) throw std::invalid_argument("phash: empty scale list");
}

uint32_t HashConfig::config_hash() const {
  uint32_t h = 2166136261u;
  h = fnv1a_value(h, stride);
  h = fnv1a_value(h, kind);
  h = fnv1a_value(h, norm);
  h = fnv1a_value(h, order_bound);
  for (int w : scales) h = fnv1a_value(h, w);
  h = fnv1a_value(h, pooling);
  h = fnv1a_value(h, strategy.code());
  return h;
}

HashDigest phash_generate(const GrayImage& image, const HashConfig& cfg) {
  cfg.validate();
  if (image.width < cfg.stride || image.height < cfg.stride) {
    throw std::invalid_argument("phash: image smaller than one grid cell");
  }
  const OrderSet orders = order_set(cfg.kind, cfg.norm, cfg.order_bound);
  const FeatureField features =
      pooled_features(image, cfg.kind, orders, cfg.scales, cfg.strategy, cfg.pooling);

  HashDigest digest;
  digest.config_hash = cfg.config_hash();
  digest.grid_cols = image.width / cfg.stride;
  digest.grid_rows = image.height / cfg.stride;
  digest.dim = features.dim;

  // grid-sampled features at cell centers (border cells read the zero-padded
  // dense values; the hash only needs them to be deterministic)
  const size_t cells = static_cast<size_t>(digest.grid_cols) * digest.grid_rows;
  std::vector<double> raw(cells * digest.dim);
  for (int gy = 0; gy < digest.grid_rows; ++gy) {
    for (int gx = 0; gx < digest.grid_cols; ++gx) {
      const int x = gx * cfg.stride + cfg.stride / 2;
      const int y = gy * cfg.stride + cfg.stride / 2;
      const auto vec = features.at(x, y);
      std::copy(vec.begin(), vec.end(),
                raw.begin() + (static_cast<size_t>(gy) * digest.grid_cols + gx) * digest.dim);
    }
  }

  // per-component affine quantization to 8 bits with stored ranges
  digest.range_min.assign(digest.dim, 0.0);
  digest.range_scale.assign(digest.dim, 0.0);
  for (int k = 0; k < digest.dim; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < cells; ++c) {
      lo = std::min(lo, raw[c * digest.dim + k]);
      hi = std::max(hi, raw[c * digest.dim + k]);
    }
    digest.range_min[k] = lo;
    digest.range_scale[k] = hi - lo;
  }
  digest.bytes.assign(cells * digest.dim, 0);
  for (size_t c = 0; c < cells; ++c) {
    for (int k = 0; k < digest.dim; ++k) {
      const double scale = digest.range_scale[k];
      if (scale <= 0.0) continue;
      const double t = (raw[c * digest.dim + k] - digest.range_min[k]) / scale;
      digest.bytes[c * digest.dim + k] =
          static_cast<uint8_t>(std::clamp(std::lround(t * 255.0), 0L, 255L));
    }
  }
  return digest;
}

double otsu_threshold(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("otsu: need at least 2 values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw std::domain_error("otsu: degenerate input (all values equal)");

  constexpr int kBins = 256;
  std::vector<long> hist(kBins, 0);
  const double binw = (hi - lo) / kBins;
  for (double v : values) {
    int bin = static_cast<int>((v - lo) / binw);
    bin = std::clamp(bin, 0, kBins - 1);
    ++hist[bin];
  }

  const double total = static_cast<double>(values.size());
  double total_mean = 0.0;
  for (int b = 0; b < kBins; ++b) total_mean += (b + 0.5) * hist[b];
  total_mean /= total;

  double best_var = -1.0;
  int best_bin = 0;
  double w0 = 0.0, sum0 = 0.0;
  for (int b = 0; b < kBins - 1; ++b) {
    w0 += hist[b];
    sum0 += (b + 0.5) * hist[b];
    if (w0 == 0.0 || w0 == total) continue;
    const double w1 = total - w0;
    const double mu0 = sum0 / w0;
    const double mu1 = (total_mean * total - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best_var) {
      best_var = between;
      best_bin = b;
    }
  }
  return lo + (best_bin + 1) * binw;
}

HashCompareResult phash_compare(const HashDigest& a, const HashDigest& b) {
  if (a.config_hash != b.config_hash || a.grid_cols != b.grid_cols ||
      a.grid_rows != b.grid_rows || a.dim != b.dim) {
    throw std::invalid_argument("phash_compare: digest config/grid mismatch");
  }
  HashCompareResult result;
  result.dist = DMat(a.grid_rows, a.grid_cols, 0.0);
  result.tampered = ByteMat(a.grid_rows, a.grid_cols, 0);

  auto dequant = [](const HashDigest& d, size_t cell, int k) {
    return d.range_min[k] + d.bytes[cell * d.dim + k] / 255.0 * d.range_scale[k];
  };

  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(a.grid_rows) * a.grid_cols);
  for (int gy = 0; gy < a.grid_rows; ++gy) {
    for (int gx = 0; gx < a.grid_cols; ++gx) {
      const size_t cell = static_cast<size_t>(gy) * a.grid_cols + gx;
      double acc = 0.0;
      for (int k = 0; k < a.dim; ++k) {
        const double d = dequant(a, cell, k) - dequant(b, cell, k);
        acc += d * d;
      }
      result.dist(gy, gx) = std::sqrt(acc);
      dists.push_back(result.dist(gy, gx));
    }
  }

  const auto [lo_it, hi_it] = std::minmax_element(dists.begin(), dists.end());
  if (!(*hi_it > *lo_it)) {
    result.threshold = *hi_it; // identical digests: nothing to flag
    return result;
  }

  const double threshold = otsu_threshold(dists);

  // Otsu always splits the histogram somewhere; only trust the split when it
  // explains most of the variance (a genuinely bimodal distance map).
  double mean = 0.0;
  for (double d : dists) mean += d;
  mean /= dists.size();
  double var_total = 0.0;
  for (double d : dists) var_total += (d - mean) * (d - mean);
  var_total /= dists.size();
  double w0 = 0.0, w1 = 0.0, mu0 = 0.0, mu1 = 0.0;
  for (double d : dists) {
    if (d <= threshold) {
      w0 += 1.0;
      mu0 += d;
    } else {
      w1 += 1.0;
      mu1 += d;
    }
  }
  double effectiveness = 0.0;
  if (w0 > 0.0 && w1 > 0.0 && var_total > 0.0) {
    mu0 /= w0;
    mu1 /= w1;
    const double p0 = w0 / dists.size(), p1 = w1 / dists.size();
    effectiveness = p0 * p1 * (mu0 - mu1) * (mu0 - mu1) / var_total;
  }
  if (effectiveness < kOtsuMinEffectiveness) {
    result.threshold = *hi_it;
    return result;
  }

  result.threshold = threshold;
  for (int gy = 0; gy < a.grid_rows; ++gy) {
    for (int gx = 0; gx < a.grid_cols; ++gx) {
      if (result.dist(gy, gx) > threshold) result.tampered(gy, gx) = 1;
    }
  }
  return result;
}

Scores score_mask(const ByteMat& predicted, const ByteMat& truth, int exclude_border) {
  if (!predicted.same_shape(truth)) throw std::invalid_argument("score_mask: shape mismatch");

  ByteMat excluded(truth.rows, truth.cols, 0);
  if (exclude_border > 0) {
    const ByteMat dil = dilate_disk(truth, exclude_border);
    const ByteMat ero = erode_disk(truth, exclude_border);
    for (size_t i = 0; i < excluded.data.size(); ++i) {
      excluded.data[i] = (dil.data[i] && !ero.data[i]) ? 1 : 0;
    }
  }

  long tp = 0, fp = 0, fn = 0;
  for (int y = 0; y < truth.rows; ++y) {
    for (int x = 0; x < truth.cols; ++x) {
      if (excluded(y, x)) continue;
      const bool p = predicted(y, x) != 0;
      const bool t = truth(y, x) != 0;
      if (p && t) ++tp;
      if (p && !t) ++fp;
      if (!p && t) ++fn;
    }
  }
  Scores scores;
  scores.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  scores.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  scores.f1 = (scores.precision + scores.recall) > 0.0
                  ? 2.0 * scores.precision * scores.recall / (scores.precision + scores.recall)
                  : 0.0;
  return scores;
}

} // namespace dir
