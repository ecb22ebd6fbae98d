#include "dir/metrics.hpp"

#include "dir/fft.hpp"
#include "dir/transform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace dir {

CEReport calculation_error(BasisKind kind, IntegrationStrategy strategy, int bound, int w) {
  if (bound < 1) {
    throw std::invalid_argument("calculation_error: K must be >= 1 (S(K) with m != 0 is empty)");
  }
  CEReport report;
  report.kind = kind;
  report.strategy = strategy;
  report.bound = bound;
  report.w = w;
  const OrderSet set = order_set(kind, OrderNorm::LInf, bound);
  for (const OrderPair& pair : set.pairs) {
    if (pair.m == 0) continue;
    report.ce += std::abs(make_kernel(kind, pair.n, pair.m, w, strategy).sum());
  }
  return report;
}

const char* bench_path_name(BenchPath path) {
  switch (path) {
    case BenchPath::Spatial: return "spatial";
    case BenchPath::Fft: return "fft";
    case BenchPath::FftBank: return "fft_bank";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

GrayImage seeded_image(int size, uint64_t seed) {
  GrayImage img(size, size);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (double& s : img.samples) s = uni(rng);
  return img;
}

} // namespace

std::vector<DTReport> decomposition_benchmark(int image_size, BasisKind kind, OrderPair order,
                                              const std::vector<int>& scales,
                                              const std::vector<BenchPath>& paths, int reps,
                                              uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("decomposition_benchmark: reps must be >= 1");
  for (size_t i = 1; i < scales.size(); ++i) {
    if (scales[i] <= scales[i - 1]) {
      throw std::invalid_argument("decomposition_benchmark: scales must be sorted ascending");
    }
  }
  const GrayImage image = seeded_image(image_size, seed);
  const int max_w = scales.empty() ? 0 : scales.back();
  const int spec_cols = fftu::good_size(image_size + 2 * max_w);
  const int spec_rows = spec_cols;
  const IntegrationStrategy strategy = IntegrationStrategy::zoa();

  // Bank construction is excluded from the timing: the lookup table is the
  // whole point of the FftBank path.
  KernelBank bank;
  const bool want_bank = std::find(paths.begin(), paths.end(), BenchPath::FftBank) != paths.end();
  if (want_bank) {
    OrderSet single;
    single.kind = kind;
    single.pairs = {order};
    bank = bank_build(kind, single, scales, spec_cols, spec_rows, strategy, false);
  }

  std::vector<DTReport> reports;
  volatile double sink = 0.0; // keeps the timed work observable
  for (BenchPath path : paths) {
    for (int w : scales) {
      auto run_once = [&]() {
        switch (path) {
          case BenchPath::Spatial: {
            const Kernel kernel = make_kernel(kind, order.n, order.m, w, strategy);
            const CMat out = dense_spatial(image, kernel);
            sink = sink + out(0, 0).real();
            break;
          }
          case BenchPath::Fft: {
            const Kernel kernel = make_kernel(kind, order.n, order.m, w, strategy);
            const CMat spec = kernel_spectrum(kernel, spec_cols, spec_rows);
            const CMat out = dense_fft(image, spec, w);
            sink = sink + out(0, 0).real();
            break;
          }
          case BenchPath::FftBank: {
            const CMat* spec = bank.find(order.n, order.m, w);
            const CMat out = dense_fft(image, *spec, w);
            sink = sink + out(0, 0).real();
            break;
          }
        }
      };

      run_once(); // warm-up, discarded
      std::vector<double> times;
      times.reserve(reps);
      for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        run_once();
        const auto t1 = Clock::now();
        times.push_back(elapsed_seconds(t0, t1));
      }
      std::sort(times.begin(), times.end());
      DTReport report;
      report.path = path;
      report.image_size = image_size;
      report.w = w;
      report.seconds = times[times.size() / 2];
      reports.push_back(report);
    }
  }
  (void)sink;
  return reports;
}

} // namespace dir
