#include "dir/match.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dir {

namespace {

// Deterministic per-(seed, phase, pixel) stream; keeps the scan fully
// reproducible no matter how candidates are accepted or rejected.
struct HashRng {
  uint64_t state;
  HashRng(uint64_t seed, uint64_t phase, uint64_t x, uint64_t y) {
    state = seed ^ (phase * 0x9E3779B97F4A7C15ULL) ^ (x * 0xBF58476D1CE4E5B9ULL) ^
            (y * 0x94D049BB133111EBULL);
    next();
    next();
  }
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // uniform integer in [lo, hi]
  int uniform(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }
};

inline double feature_dist2(const FeatureField& a, int ax, int ay, const FeatureField& b, int bx,
                            int by) {
  const double* va = &a.data[(static_cast<size_t>(ay) * a.width + ax) * a.dim];
  const double* vb = &b.data[(static_cast<size_t>(by) * b.width + bx) * b.dim];
  double acc = 0.0;
  for (int k = 0; k < a.dim; ++k) {
    const double d = va[k] - vb[k];
    acc += d * d;
  }
  return acc;
}

} // namespace

MatchField dense_match(const FeatureField& src, const FeatureField& dst,
                       const MatchParams& params) {
  if (src.dim != dst.dim) throw std::invalid_argument("dense_match: feature dim mismatch");
  if (params.iterations < 1) throw std::invalid_argument("dense_match: iterations must be >= 1");

  const int W = src.width, H = src.height;
  MatchField mf;
  mf.width = W;
  mf.height = H;
  mf.dx = Mat<int>(H, W, 0);
  mf.dy = Mat<int>(H, W, 0);
  mf.dist = DMat(H, W, std::numeric_limits<double>::infinity());
  mf.valid = ByteMat(H, W, 0);

  const double min_off2 = params.min_offset * params.min_offset;
  auto offset_ok = [&](int x, int y, int ox, int oy) {
    const int tx = x + ox, ty = y + oy;
    if (tx < 0 || tx >= dst.width || ty < 0 || ty >= dst.height) return false;
    if (!dst.is_valid(tx, ty)) return false;
    const double len2 = static_cast<double>(ox) * ox + static_cast<double>(oy) * oy;
    return len2 >= min_off2;
  };

  std::vector<double> best(static_cast<size_t>(W) * H,
                           std::numeric_limits<double>::infinity());

  // seeded random initialization
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (!src.is_valid(x, y)) continue;
      HashRng rng(params.seed, 0, static_cast<uint64_t>(x), static_cast<uint64_t>(y));
      bool found = false;
      for (int attempt = 0; attempt < 64 && !found; ++attempt) {
        const int tx = rng.uniform(0, dst.width - 1);
        const int ty = rng.uniform(0, dst.height - 1);
        const int ox = tx - x, oy = ty - y;
        if (!offset_ok(x, y, ox, oy)) continue;
        mf.dx(y, x) = ox;
        mf.dy(y, x) = oy;
        best[static_cast<size_t>(y) * W + x] = feature_dist2(src, x, y, dst, tx, ty);
        mf.valid(y, x) = 1;
        found = true;
      }
      if (!found) {
        // deterministic fallback scan
        for (int ty = 0; ty < dst.height && !found; ++ty) {
          for (int tx = 0; tx < dst.width && !found; ++tx) {
            const int ox = tx - x, oy = ty - y;
            if (!offset_ok(x, y, ox, oy)) continue;
            mf.dx(y, x) = ox;
            mf.dy(y, x) = oy;
            best[static_cast<size_t>(y) * W + x] = feature_dist2(src, x, y, dst, tx, ty);
            mf.valid(y, x) = 1;
            found = true;
          }
        }
      }
    }
  }

  const int max_radius = std::max(dst.width, dst.height) / 2;
  auto try_offset = [&](int x, int y, int ox, int oy) {
    if (!offset_ok(x, y, ox, oy)) return;
    const double d2 = feature_dist2(src, x, y, dst, x + ox, y + oy);
    double& cur = best[static_cast<size_t>(y) * W + x];
    if (d2 < cur) {
      cur = d2;
      mf.dx(y, x) = ox;
      mf.dy(y, x) = oy;
    }
  };

  for (int iter = 1; iter <= params.iterations; ++iter) {
    const bool forward = (iter % 2 == 1);
    const int x0 = forward ? 0 : W - 1;
    const int x1 = forward ? W : -1;
    const int y0 = forward ? 0 : H - 1;
    const int y1 = forward ? H : -1;
    const int step = forward ? 1 : -1;
    for (int y = y0; y != y1; y += step) {
      for (int x = x0; x != x1; x += step) {
        if (mf.valid(y, x) == 0) continue;
        // propagation from the two already-visited neighbors
        const int nx = x - step, ny = y - step;
        if (nx >= 0 && nx < W && mf.valid(y, nx)) try_offset(x, y, mf.dx(y, nx), mf.dy(y, nx));
        if (ny >= 0 && ny < H && mf.valid(ny, x)) try_offset(x, y, mf.dx(ny, x), mf.dy(ny, x));
        // exponentially decaying random search around the current best
        HashRng rng(params.seed, static_cast<uint64_t>(iter), static_cast<uint64_t>(x),
                    static_cast<uint64_t>(y));
        for (int radius = max_radius; radius >= 1; radius /= 2) {
          const int ox = mf.dx(y, x) + rng.uniform(-radius, radius);
          const int oy = mf.dy(y, x) + rng.uniform(-radius, radius);
          try_offset(x, y, ox, oy);
        }
      }
    }
  }

  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (mf.valid(y, x)) mf.dist(y, x) = std::sqrt(best[static_cast<size_t>(y) * W + x]);
    }
  }
  return mf;
}

Affine Affine::rotation_about(double cx, double cy, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Affine aff;
  aff.a = c;
  aff.b = -s;
  aff.c = s;
  aff.d = c;
  aff.tx = cx - c * cx + s * cy;
  aff.ty = cy - s * cx - c * cy;
  return aff;
}

double repeatability(const MatchField& mf, const Affine& gt, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("repeatability: epsilon must be > 0");
  long total = 0, hits = 0;
  const double eps2 = epsilon * epsilon;
  for (int y = 0; y < mf.height; ++y) {
    for (int x = 0; x < mf.width; ++x) {
      if (!mf.valid(y, x)) continue;
      ++total;
      double gx, gy;
      gt.apply(x, y, gx, gy);
      const double dx = (x + mf.dx(y, x)) - gx;
      const double dy = (y + mf.dy(y, x)) - gy;
      if (dx * dx + dy * dy <= eps2) ++hits;
    }
  }
  return total > 0 ? static_cast<double>(hits) / total : 0.0;
}

} // namespace dir
