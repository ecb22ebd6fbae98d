#include "dir/kernel.hpp"

#include "dir/fft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace dir {

IntegrationStrategy IntegrationStrategy::upsample(int l_side) {
  if (l_side < 1) throw std::invalid_argument("Upsample: l_side must be >= 1");
  return {Mode::Upsample, l_side};
}

IntegrationStrategy IntegrationStrategy::from_code(uint32_t code) {
  if (code == 0) return zoa();
  return upsample(static_cast<int>(code));
}

std::string IntegrationStrategy::name() const {
  if (mode == Mode::ZOA) return "zoa";
  return "up" + std::to_string(l_side);
}

Cpx Kernel::sum() const {
  Cpx acc = 0.0;
  for (const Cpx& z : grid.data) acc += z;
  return acc;
}

int Kernel::support_count() const {
  int count = 0;
  for (const Cpx& z : grid.data) {
    if (z != Cpx{0.0, 0.0}) ++count;
  }
  return count;
}

Kernel make_kernel(BasisKind kind, int n, int m, int w, IntegrationStrategy strategy) {
  require_valid_order(kind, n, m);
  if (w < 1) throw std::invalid_argument("make_kernel: w must be >= 1");
  const int l = strategy.mode == IntegrationStrategy::Mode::ZOA ? 1 : strategy.l_side;

  Kernel kernel;
  kernel.kind = kind;
  kernel.n = n;
  kernel.m = m;
  kernel.w = w;
  kernel.strategy = strategy;
  kernel.grid = CMat(2 * w, 2 * w);

  RadialEvaluator radial(kind, n, m);
  const double wd = static_cast<double>(w);
  const double w2 = wd * wd;
  const double sample_weight = 1.0 / (static_cast<double>(l) * l * w2);

  for (int b = 0; b < 2 * w; ++b) {
    for (int a = 0; a < 2 * w; ++a) {
      Cpx acc = 0.0;
      for (int sb = 0; sb < l; ++sb) {
        const double dy = b + (sb + 0.5) / l - wd;
        for (int sa = 0; sa < l; ++sa) {
          const double dx = a + (sa + 0.5) / l - wd;
          const double d2 = dx * dx + dy * dy;
          if (d2 > w2) continue;
          const double r = std::min(1.0, std::sqrt(d2) / wd);
          double theta = std::atan2(dy, dx);
          if (theta < 0.0) theta += kTwoPi;
          acc += std::conj(radial(r) * angular_eval(m, theta));
        }
      }
      kernel.grid(b, a) = acc * sample_weight;
    }
  }
  return kernel;
}

Kernel kernel_zoa(BasisKind kind, int n, int m, int w) {
  return make_kernel(kind, n, m, w, IntegrationStrategy::zoa());
}

Kernel kernel_upsampled(BasisKind kind, int n, int m, int w, int l_side) {
  return make_kernel(kind, n, m, w, IntegrationStrategy::upsample(l_side));
}

CMat kernel_spectrum(const Kernel& kernel, int spec_cols, int spec_rows) {
  const int w = kernel.w;
  if (spec_cols < 2 * w || spec_rows < 2 * w) {
    std::ostringstream msg;
    msg << "kernel_spectrum: padded size " << spec_cols << "x" << spec_rows
        << " too small for kernel of scale " << w;
    throw std::invalid_argument(msg.str());
  }
  // Tap at offset (da, db) = (a - w, b - w) goes to index (-da, -db) mod size
  // so that the frequency product realizes out(u,v) = sum h(d) f((u,v)+d).
  CMat padded(spec_rows, spec_cols);
  for (int b = 0; b < 2 * w; ++b) {
    const int row = ((w - b) % spec_rows + spec_rows) % spec_rows;
    for (int a = 0; a < 2 * w; ++a) {
      const int col = ((w - a) % spec_cols + spec_cols) % spec_cols;
      padded(row, col) = kernel.grid(b, a);
    }
  }
  return fftu::fft2(padded);
}

namespace {

// All kernel taps live at half-integer offsets, so every spectrum carries the
// same phase ramp exp(-j*pi*(fr+fc)/size) on the centered grid. Interpolation
// has to happen on the de-ramped (smooth) spectrum.
CMat centered_deramped(const CMat& spectrum) {
  const int rows = spectrum.rows, cols = spectrum.cols;
  const int r0 = rows / 2, c0 = cols / 2;
  CMat out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const double fr = r - r0;
    for (int c = 0; c < cols; ++c) {
      const double fc = c - c0;
      const Cpx src = spectrum(((r - r0) % rows + rows) % rows, ((c - c0) % cols + cols) % cols);
      const double phase = kPi * (fr / rows + fc / cols);
      out(r, c) = src * Cpx{std::cos(phase), std::sin(phase)};
    }
  }
  return out;
}

} // namespace

CMat spectrum_rescale(const CMat& spectrum_w0, int w0, int w) {
  if (w0 < 1 || w < 1) throw std::invalid_argument("spectrum_rescale: scales must be >= 1");
  if (w == w0) return spectrum_w0;

  const int rows = spectrum_w0.rows, cols = spectrum_w0.cols;
  const int r0 = rows / 2, c0 = cols / 2;
  const double ratio = static_cast<double>(w) / w0;
  const CMat src = centered_deramped(spectrum_w0);

  CMat out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const double sr = (r - r0) * ratio + r0;
    for (int c = 0; c < cols; ++c) {
      const double sc = (c - c0) * ratio + c0;
      Cpx val = 0.0;
      if (sr >= 0.0 && sr <= rows - 1 && sc >= 0.0 && sc <= cols - 1) {
        const int ir = static_cast<int>(std::floor(sr));
        const int ic = static_cast<int>(std::floor(sc));
        const double tr = sr - ir;
        const double tc = sc - ic;
        const Cpx v00 = src(ir, ic);
        const Cpx v01 = (tc > 0.0) ? src(ir, ic + 1) : Cpx{0.0, 0.0};
        const Cpx v10 = (tr > 0.0) ? src(ir + 1, ic) : Cpx{0.0, 0.0};
        const Cpx v11 = (tr > 0.0 && tc > 0.0) ? src(ir + 1, ic + 1) : Cpx{0.0, 0.0};
        val = v00 * ((1.0 - tr) * (1.0 - tc)) + v01 * ((1.0 - tr) * tc) +
              v10 * (tr * (1.0 - tc)) + v11 * (tr * tc);
      }
      // re-apply the half-pixel ramp of the target grid, undo the centering
      const double fr = r - r0;
      const double fc = c - c0;
      const double phase = -kPi * (fr / rows + fc / cols);
      out(((r - r0) % rows + rows) % rows, ((c - c0) % cols + cols) % cols) =
          val * Cpx{std::cos(phase), std::sin(phase)};
    }
  }
  return out;
}

const CMat* KernelBank::find(int n, int m, int w) const {
  for (size_t oi = 0; oi < orders.size(); ++oi) {
    if (orders[oi].n != n || orders[oi].m != m) continue;
    for (size_t si = 0; si < scales.size(); ++si) {
      if (scales[si] == w) return &spectra[oi * scales.size() + si];
    }
  }
  return nullptr;
}

KernelBank bank_build(BasisKind kind, const OrderSet& orders, const std::vector<int>& scales,
                      int spec_cols, int spec_rows, IntegrationStrategy strategy,
                      bool use_rescale, int threads) {
  if (scales.empty()) throw std::invalid_argument("bank_build: empty scale list");
  const int max_w = *std::max_element(scales.begin(), scales.end());
  if (2 * max_w > std::min(spec_cols, spec_rows)) {
    throw std::invalid_argument("bank_build: padded size too small for largest scale");
  }

  KernelBank bank;
  bank.kind = kind;
  bank.strategy = strategy;
  bank.spec_cols = spec_cols;
  bank.spec_rows = spec_rows;
  bank.orders = orders.pairs;
  bank.scales = scales;
  bank.spectra.resize(orders.pairs.size() * scales.size());

  const int min_w = *std::min_element(scales.begin(), scales.end());
  const size_t n_orders = orders.pairs.size();

  auto build_order = [&](size_t oi) {
    const OrderPair& pair = bank.orders[oi];
    if (use_rescale) {
      const Kernel base = make_kernel(kind, pair.n, pair.m, min_w, strategy);
      const CMat base_spec = kernel_spectrum(base, spec_cols, spec_rows);
      for (size_t si = 0; si < scales.size(); ++si) {
        bank.spectra[oi * scales.size() + si] = spectrum_rescale(base_spec, min_w, scales[si]);
      }
    } else {
      for (size_t si = 0; si < scales.size(); ++si) {
        const Kernel k = make_kernel(kind, pair.n, pair.m, scales[si], strategy);
        bank.spectra[oi * scales.size() + si] = kernel_spectrum(k, spec_cols, spec_rows);
      }
    }
  };

  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(n_orders)));
  if (nthreads == 1) {
    for (size_t oi = 0; oi < n_orders; ++oi) build_order(oi);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t]() {
        for (size_t oi = t; oi < n_orders; oi += nthreads) build_order(oi);
      });
    }
    for (auto& th : pool) th.join();
  }
  return bank;
}

} // namespace dir
