#ifndef DIR_METRICS_HPP
#define DIR_METRICS_HPP

#include "dir/kernel.hpp"

#include <string>

namespace dir {

// Sum of |unity-image moment| over the infinity-norm order set S(K) with
// m != 0. The unity-image moment of a kernel is just its tap sum, so no image
// pass is needed.
struct CEReport {
  BasisKind kind = BasisKind::PCT;
  IntegrationStrategy strategy;
  int bound = 1; // K
  int w = 8;
  double ce = 0.0;
};

CEReport calculation_error(BasisKind kind, IntegrationStrategy strategy, int bound, int w);

enum class BenchPath { Spatial, Fft, FftBank };

const char* bench_path_name(BenchPath path);

// Single-thread wall time of one dense channel decomposition on a seeded
// pseudo-random image: warm-up run discarded, median of `reps` timed runs.
struct DTReport {
  BenchPath path = BenchPath::Fft;
  int image_size = 0;
  int w = 0;
  double seconds = 0.0;
};

std::vector<DTReport> decomposition_benchmark(int image_size, BasisKind kind, OrderPair order,
                                              const std::vector<int>& scales,
                                              const std::vector<BenchPath>& paths, int reps = 5,
                                              uint64_t seed = 20220901ULL);

} // namespace dir

#endif
