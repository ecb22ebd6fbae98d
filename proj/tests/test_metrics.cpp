#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dir/metrics.hpp"

#include <algorithm>
#include <map>

using namespace dir;

TEST_CASE("CE: up-sampling beats ZOA by an order of magnitude at K=20") {
  const CEReport zoa = calculation_error(BasisKind::PCT, IntegrationStrategy::zoa(), 20, 8);
  const CEReport up8 = calculation_error(BasisKind::PCT, IntegrationStrategy::upsample(8), 20, 8);
  CHECK(zoa.ce >= 10.0 * up8.ce);
  // measured once: zoa 17.2, up8 0.155; frozen with 2x slack as regressions
  CHECK(zoa.ce <= 35.0);
  CHECK(up8.ce <= 0.31);
}

TEST_CASE("CE: low-order up-sampled error is small, K=0 is rejected") {
  CHECK(calculation_error(BasisKind::PCT, IntegrationStrategy::upsample(8), 1, 8).ce <= 1e-2);
  CHECK_THROWS_AS(calculation_error(BasisKind::PCT, IntegrationStrategy::zoa(), 0, 8),
                  std::invalid_argument);
}

TEST_CASE("CE is monotone non-increasing in the up-sampling rate") {
  for (int bound : {5, 10, 20}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int l : {1, 2, 4, 8}) {
      const double ce =
          calculation_error(BasisKind::PCT, IntegrationStrategy::upsample(l), bound, 8).ce;
      CHECK(ce <= prev);
      prev = ce;
    }
  }
}

TEST_CASE("decomposition benchmark: report structure and stable path ordering") {
  const std::vector<int> scales = {8, 16};
  const std::vector<BenchPath> paths = {BenchPath::Spatial, BenchPath::Fft, BenchPath::FftBank};

  std::vector<BenchPath> fastest_per_run;
  for (int run = 0; run < 3; ++run) {
    const auto reports = decomposition_benchmark(128, BasisKind::PCT, {1, 1}, scales, paths, 3);
    REQUIRE(reports.size() == paths.size() * scales.size());
    for (const DTReport& r : reports) CHECK(r.seconds > 0.0);

    // fastest path at the largest scale
    BenchPath fastest = BenchPath::Spatial;
    double best = std::numeric_limits<double>::infinity();
    for (const DTReport& r : reports) {
      if (r.w == 16 && r.seconds < best) {
        best = r.seconds;
        fastest = r.path;
      }
    }
    fastest_per_run.push_back(fastest);
  }
  CHECK(fastest_per_run[0] == fastest_per_run[1]);
  CHECK(fastest_per_run[1] == fastest_per_run[2]);

  CHECK_THROWS_AS(decomposition_benchmark(64, BasisKind::PCT, {1, 1}, {16, 8}, paths, 1),
                  std::invalid_argument);
}
