#include "dir/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dir {

std::vector<std::vector<double>> template_signature(const GrayImage& tmpl, BasisKind kind,
                                                    const OrderSet& orders,
                                                    const std::vector<int>& scales,
                                                    IntegrationStrategy strategy) {
  const int max_w = *std::max_element(scales.begin(), scales.end());
  const int cu = tmpl.width / 2;
  const int cv = tmpl.height / 2;
  if (cu < max_w || cv < max_w || tmpl.width - cu < max_w || tmpl.height - cv < max_w) {
    throw std::invalid_argument("template_signature: template too small for largest scale");
  }
  std::vector<std::vector<double>> signatures;
  signatures.reserve(scales.size());
  for (int w : scales) {
    std::vector<double> sig;
    sig.reserve(orders.pairs.size());
    for (const OrderPair& pair : orders.pairs) {
      const Kernel kernel = make_kernel(kind, pair.n, pair.m, w, strategy);
      sig.push_back(std::abs(moments_at(tmpl, kernel, cu, cv)));
    }
    signatures.push_back(std::move(sig));
  }
  return signatures;
}

DMat distance_map(const FeatureField& features, std::span<const double> signature) {
  if (static_cast<int>(signature.size()) != features.dim) {
    throw std::invalid_argument("distance_map: signature dimension mismatch");
  }
  DMat map(features.height, features.width, std::numeric_limits<double>::infinity());
  for (int y = 0; y < features.height; ++y) {
    for (int x = 0; x < features.width; ++x) {
      if (!features.is_valid(x, y)) continue;
      const auto vec = features.at(x, y);
      double acc = 0.0;
      for (int k = 0; k < features.dim; ++k) {
        const double d = vec[k] - signature[k];
        acc += d * d;
      }
      map(y, x) = std::sqrt(acc);
    }
  }
  return map;
}

ScoredMaps best_distance(const std::vector<FeatureField>& fields,
                         const std::vector<std::vector<double>>& signatures) {
  if (fields.empty() || fields.size() != signatures.size()) {
    throw std::invalid_argument("best_distance: fields/signatures mismatch");
  }
  ScoredMaps maps;
  maps.dist = DMat(fields[0].height, fields[0].width, std::numeric_limits<double>::infinity());
  maps.scale = Mat<int>(fields[0].height, fields[0].width, 0);
  for (size_t si = 0; si < fields.size(); ++si) {
    const DMat dm = distance_map(fields[si], signatures[si]);
    const int w = fields[si].scales.front();
    for (int y = 0; y < dm.rows; ++y) {
      for (int x = 0; x < dm.cols; ++x) {
        if (dm(y, x) < maps.dist(y, x)) {
          maps.dist(y, x) = dm(y, x);
          maps.scale(y, x) = w;
        }
      }
    }
  }
  return maps;
}

DetectionResult detect_peaks(const ScoredMaps& maps, double threshold, double nms_radius) {
  if (threshold <= 0.0) throw std::invalid_argument("detect_peaks: threshold must be > 0");
  std::vector<Detection> candidates;
  for (int y = 0; y < maps.dist.rows; ++y) {
    for (int x = 0; x < maps.dist.cols; ++x) {
      const double d = maps.dist(y, x);
      if (d < threshold) candidates.push_back({x, y, maps.scale(y, x), d});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score < b.score;
    return std::pair{a.v, a.u} < std::pair{b.v, b.u};
  });

  DetectionResult result;
  result.threshold = threshold;
  result.nms_radius = nms_radius;
  const double r2 = nms_radius * nms_radius;
  for (const Detection& cand : candidates) {
    bool suppressed = false;
    for (const Detection& kept : result.detections) {
      const double du = cand.u - kept.u;
      const double dv = cand.v - kept.v;
      if (du * du + dv * dv <= r2) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) result.detections.push_back(cand);
  }
  return result;
}

DetectionResult detect_peaks(const DMat& map, int w, double threshold, double nms_radius) {
  ScoredMaps maps;
  maps.dist = map;
  maps.scale = Mat<int>(map.rows, map.cols, w);
  return detect_peaks(maps, threshold, nms_radius);
}

Scores f1_score(const std::vector<Detection>& detections,
                const std::vector<GroundTruthPoint>& gt) {
  std::vector<Detection> sorted = detections;
  std::sort(sorted.begin(), sorted.end(),
            [](const Detection& a, const Detection& b) { return a.score < b.score; });

  std::vector<bool> taken(gt.size(), false);
  int tp = 0;
  for (const Detection& det : sorted) {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (size_t gi = 0; gi < gt.size(); ++gi) {
      if (taken[gi]) continue;
      const double du = det.u - gt[gi].u;
      const double dv = det.v - gt[gi].v;
      const double d2 = du * du + dv * dv;
      if (d2 <= gt[gi].tolerance * gt[gi].tolerance && d2 < best_d2) {
        best_d2 = d2;
        best = static_cast<int>(gi);
      }
    }
    if (best >= 0) {
      taken[best] = true;
      ++tp;
    }
  }

  Scores scores;
  const int np = static_cast<int>(sorted.size());
  const int ng = static_cast<int>(gt.size());
  scores.precision = np > 0 ? static_cast<double>(tp) / np : 0.0;
  scores.recall = ng > 0 ? static_cast<double>(tp) / ng : 0.0;
  scores.f1 = (scores.precision + scores.recall) > 0.0
                  ? 2.0 * scores.precision * scores.recall / (scores.precision + scores.recall)
                  : 0.0;
  return scores;
}

} // namespace dir
