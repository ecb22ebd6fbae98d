#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dir/detect.hpp"

#include "testutil.hpp"

#include <algorithm>
#include <cmath>

using namespace dir;
using namespace dir::testutil;

namespace {

const IntegrationStrategy kZoa = IntegrationStrategy::zoa();

struct SceneAnalysis {
  ScoredMaps maps;
  double min_distractor = 0.0;
};

SceneAnalysis analyze_scene(const GrayImage& scene_img, const GrayImage& tmpl,
                            const std::vector<std::pair<int, int>>& distractors,
                            const OrderSet& orders, const std::vector<int>& scales) {
  const auto signatures = template_signature(tmpl, orders.kind, orders, scales, kZoa);
  const MomentField field =
      decompose(scene_img, orders.kind, orders, scales, kZoa, DensePath::Fft);
  const auto fields = magnitude_features_all(field, orders, scales);
  SceneAnalysis out{best_distance(fields, signatures), 0.0};
  double min_d = std::numeric_limits<double>::infinity();
  for (const auto& [du, dv] : distractors) min_d = std::min(min_d, out.maps.dist(dv, du));
  out.min_distractor = min_d;
  return out;
}

} // namespace

TEST_CASE("signature of a zero template is the zero vector") {
  const GrayImage zero(48, 48, 0.0);
  const OrderSet orders = order_set(BasisKind::PCT, OrderNorm::LInf, 3);
  const auto sig = template_signature(zero, BasisKind::PCT, orders, {12, 16}, kZoa);
  REQUIRE(sig.size() == 2);
  for (const auto& s : sig) {
    for (double v : s) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(template_signature(zero, BasisKind::PCT, orders, {32}, kZoa),
                  std::invalid_argument);
}

TEST_CASE("pasting the template reproduces its signature in the dense field") {
  const GrayImage tmpl = glyph_patch('F');
  GrayImage host = GrayImage(160, 160, 0.25);
  paste(host, tmpl, 60, 72);
  const OrderSet orders = order_set(BasisKind::PCT, OrderNorm::LInf, 4);
  const std::vector<int> scales = {12, 16};
  const auto sig = template_signature(tmpl, BasisKind::PCT, orders, scales, kZoa);
  const MomentField field = decompose(host, BasisKind::PCT, orders, scales, kZoa, DensePath::Fft);
  const auto fields = magnitude_features_all(field, orders, scales);
  for (size_t si = 0; si < scales.size(); ++si) {
    const auto vec = fields[si].at(60 + 24, 72 + 24);
    for (size_t k = 0; k < sig[si].size(); ++k) CHECK(std::abs(vec[k] - sig[si][k]) <= 1e-8);
  }
}

TEST_CASE("doubling the template tracks the doubled-scale signature") {
  const GrayImage tmpl = disk_mask(textured_image(64, 64, 3, 3.0), 32.0, 30.0, 0.25);
  const GrayImage doubled = resize_bilinear(tmpl, 128, 128);
  const OrderSet orders = order_set(BasisKind::PCT, OrderNorm::LInf, 3);
  const auto sig1 = template_signature(tmpl, BasisKind::PCT, orders, {12}, kZoa);
  const auto sig2 = template_signature(doubled, BasisKind::PCT, orders, {24}, kZoa);
  double num = 0.0, den = 0.0;
  for (size_t k = 0; k < sig1[0].size(); ++k) {
    num += (sig2[0][k] - sig1[0][k]) * (sig2[0][k] - sig1[0][k]);
    den += sig1[0][k] * sig1[0][k];
  }
  CHECK(std::sqrt(num / den) <= 0.05);
}

TEST_CASE("distance map basics: self-distance zero, nonnegative, known minima") {
  GrayImage host(192, 192, 0.25);
  const GrayImage tmpl = glyph_patch('F');
  const std::vector<std::pair<int, int>> spots = {{10, 16}, {96, 30}, {40, 120}};
  for (const auto& [x, y] : spots) paste(host, tmpl, x, y);

  const OrderSet orders = order_set(BasisKind::PCT, OrderNorm::LInf, 3);
  const std::vector<int> scales = {16};
  const auto sig = template_signature(tmpl, BasisKind::PCT, orders, scales, kZoa);
  const MomentField field = decompose(host, BasisKind::PCT, orders, scales, kZoa, DensePath::Fft);
  const FeatureField features = magnitude_features(field, orders, 16);
  const DMat map = distance_map(features, sig[0]);

  for (int y = 0; y < map.rows; ++y) {
    for (int x = 0; x < map.cols; ++x) CHECK(map(y, x) >= 0.0);
  }
  for (const auto& [x, y] : spots) {
    CHECK(map(y + 24, x + 24) <= 1e-8); // exact copy: distance ~ 0
  }
  // invalid border positions carry the +inf sentinel
  CHECK(std::isinf(map(0, 0)));

  std::vector<double> bad(sig[0].size() + 1, 0.0);
  CHECK_THROWS_AS(distance_map(features, bad), std::invalid_argument);
}

TEST_CASE("peak extraction applies threshold and non-maximum suppression") {
  ScoredMaps maps;
  maps.dist = DMat(64, 64, 1e9);
  maps.scale = Mat<int>(64, 64, 8);
  CHECK(detect_peaks(maps, 0.5, 10.0).detections.empty());
  CHECK_THROWS_AS(detect_peaks(maps, 0.0, 10.0), std::invalid_argument);

  maps.dist(20, 20) = 0.1;
  maps.dist(20, 23) = 0.2; // 3 px away: suppressed at radius 10
  maps.dist(50, 50) = 0.3;
  const DetectionResult result = detect_peaks(maps, 0.5, 10.0);
  REQUIRE(result.detections.size() == 2);
  CHECK(result.detections[0].u == 20);
  CHECK(result.detections[0].v == 20);
  CHECK(result.detections[1].u == 50);
  // ascending score and pairwise separation
  CHECK(result.detections[0].score <= result.detections[1].score);
}

TEST_CASE("f1_score arithmetic") {
  std::vector<GroundTruthPoint> gt;
  for (int i = 0; i < 5; ++i) gt.push_back({50.0 * i + 25.0, 30.0, 8.0});

  std::vector<Detection> perfect;
  for (int i = 0; i < 5; ++i) perfect.push_back({50 * i + 25, 30, 8, 0.1});
  const Scores s1 = f1_score(perfect, gt);
  CHECK(s1.precision == doctest::Approx(1.0));
  CHECK(s1.recall == doctest::Approx(1.0));
  CHECK(s1.f1 == doctest::Approx(1.0));

  const Scores s2 = f1_score({}, gt);
  CHECK(s2.precision == 0.0);
  CHECK(s2.recall == 0.0);
  CHECK(s2.f1 == 0.0);

  // 3 of 5 found plus one false alarm
  std::vector<Detection> partial;
  for (int i = 0; i < 3; ++i) partial.push_back({50 * i + 27, 32, 8, 0.1});
  partial.push_back({400, 200, 8, 0.4});
  const Scores s3 = f1_score(partial, gt);
  CHECK(s3.precision == doctest::Approx(0.75));
  CHECK(s3.recall == doctest::Approx(0.6));
  CHECK(s3.f1 == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35));
}

TEST_CASE("letter scene: perfect F1 clean, robust under heavy noise") {
  const LetterScene scene = make_letter_scene();
  const OrderSet orders = order_set(BasisKind::PCT, OrderNorm::LInf, 5);
  const std::vector<int> scales = {12, 16};

  std::vector<GroundTruthPoint> gt;
  for (const auto& [u, v] : scene.instance_centers) {
    gt.push_back({static_cast<double>(u), static_cast<double>(v), 8.0});
  }

  SUBCASE("clean scene") {
    const SceneAnalysis a =
        analyze_scene(scene.image, scene.tmpl, scene.distractor_centers, orders, scales);
    const DetectionResult result = detect_peaks(a.maps, 0.5 * a.min_distractor, 16.0);
    CHECK(result.detections.size() == 5);
    const Scores s = f1_score(result.detections, gt);
    CHECK(s.f1 == doctest::Approx(1.0));
  }

  SUBCASE("gaussian noise, variance 0.01") {
    const GrayImage noisy = add_gaussian_noise(scene.image, 0.1, 2024);
    const SceneAnalysis a =
        analyze_scene(noisy, scene.tmpl, scene.distractor_centers, orders, scales);
    const DetectionResult result = detect_peaks(a.maps, 0.5 * a.min_distractor, 16.0);
    const Scores s = f1_score(result.detections, gt);
    CHECK(s.f1 >= 0.9);
  }
}
