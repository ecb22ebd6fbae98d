#ifndef DIR_DETECT_HPP
#define DIR_DETECT_HPP

#include "dir/invariants.hpp"

namespace dir {

struct Detection {
  int u = 0;
  int v = 0;
  int w = 0;
  double score = 0.0; // feature distance, smaller is better
};

struct DetectionResult {
  std::vector<Detection> detections; // ascending score
  double threshold = 0.0;
  double nms_radius = 0.0;
};

struct GroundTruthPoint {
  double u = 0.0;
  double v = 0.0;
  double tolerance = 8.0;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Magnitude feature vector at the template center, one per scale.
std::vector<std::vector<double>> template_signature(const GrayImage& tmpl, BasisKind kind,
                                                    const OrderSet& orders,
                                                    const std::vector<int>& scales,
                                                    IntegrationStrategy strategy);

// Per-position Euclidean distance to the signature; invalid positions get
// +infinity.
DMat distance_map(const FeatureField& features, std::span<const double> signature);

// Per-position minimum distance across scales, plus the scale achieving it.
struct ScoredMaps {
  DMat dist;
  Mat<int> scale;
};
ScoredMaps best_distance(const std::vector<FeatureField>& fields,
                         const std::vector<std::vector<double>>& signatures);

// Every sub-threshold position, kept greedily in ascending score with
// non-maximum suppression at nms_radius.
DetectionResult detect_peaks(const ScoredMaps& maps, double threshold, double nms_radius);
DetectionResult detect_peaks(const DMat& map, int w, double threshold, double nms_radius);

// Greedy one-to-one matching of detections (ascending score) to ground truth
// within each point's tolerance radius. Empty-detection convention: (0, 0, 0).
Scores f1_score(const std::vector<Detection>& detections,
                const std::vector<GroundTruthPoint>& gt);

} // namespace dir

#endif
