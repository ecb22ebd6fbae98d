#ifndef DIR_MATCH_HPP
#define DIR_MATCH_HPP

#include "dir/invariants.hpp"

namespace dir {

// Per-pixel offset into the target field plus the achieved feature distance.
struct MatchField {
  int width = 0;
  int height = 0;
  Mat<int> dx;
  Mat<int> dy;
  DMat dist;
  ByteMat valid;
};

struct MatchParams {
  int iterations = 3;
  uint64_t seed = 0;
  // Offsets strictly shorter than this are never considered (self-matching).
  double min_offset = 0.0;
};

// Approximate per-pixel nearest neighbor in feature space: seeded random
// initialization, alternating forward/backward scan-order propagation, and an
// exponentially decaying random search. Only improvements are accepted, so
// per-pixel distances are non-increasing over iterations, and the whole run
// is deterministic for a fixed seed.
MatchField dense_match(const FeatureField& src, const FeatureField& dst,
                       const MatchParams& params);

struct Affine {
  // maps (x, y) -> (a*x + b*y + tx, c*x + d*y + ty)
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0, tx = 0.0, ty = 0.0;
  static Affine identity() { return {}; }
  static Affine translation(double tx, double ty) { return {1.0, 0.0, 0.0, 1.0, tx, ty}; }
  static Affine rotation_about(double cx, double cy, double angle);
  void apply(double x, double y, double& ox, double& oy) const {
    ox = a * x + b * y + tx;
    oy = c * x + d * y + ty;
  }
};

// Fraction of valid pixels whose match lands within epsilon of the
// ground-truth mapped position.
double repeatability(const MatchField& mf, const Affine& gt, double epsilon);

} // namespace dir

#endif
