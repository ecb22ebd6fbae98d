#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dir/fft.hpp"
#include "dir/kernel.hpp"
#include "dir/serialize.hpp"
#include "dir/transform.hpp"

#include "testutil.hpp"

#include <cmath>
#include <filesystem>

using namespace dir;

namespace {

double rel_l2(const CMat& got, const CMat& want) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < got.data.size(); ++i) {
    num += std::norm(got.data[i] - want.data[i]);
    den += std::norm(want.data[i]);
  }
  return std::sqrt(num / den);
}

} // namespace

TEST_CASE("ZOA kernel sums against the analytic unity-image oracle") {
  // 2*pi * int_0^1 R_0(r) r dr = sqrt(pi) for PCT. ZOA at w=8 over-counts the
  // disk by ~3.4% with half-integer pixel centers; bounds are measured once
  // (0.0612, 0.0895) and frozen with 2x slack.
  const double sqrt_pi = std::sqrt(kPi);
  CHECK(std::abs(kernel_zoa(BasisKind::PCT, 0, 0, 8).sum() - Cpx{sqrt_pi, 0.0}) <= 0.13);
  // int_0^1 cos(2 pi r^2) r dr = 0
  CHECK(std::abs(kernel_zoa(BasisKind::PCT, 2, 0, 8).sum()) <= 0.18);
  // m != 0 moments of the unity image vanish; the symmetric grid cancels
  // m = 1 exactly, so the residual there is pure rounding
  CHECK(std::abs(kernel_zoa(BasisKind::PCT, 0, 1, 8).sum()) <= 1e-12);
}

TEST_CASE("pseudo up-sampling tightens the unity-image residual") {
  const double sqrt_pi = std::sqrt(kPi);
  const Kernel up = kernel_upsampled(BasisKind::PCT, 0, 0, 8, 8);
  CHECK(std::abs(up.sum() - Cpx{sqrt_pi, 0.0}) <= 5e-3);

  // m = 4 is the lowest repetition the 4-fold-symmetric grid cannot cancel,
  // so it carries a real ZOA residual (0.036 measured vs 4.2e-4 upsampled)
  const double zoa_residual = std::abs(kernel_zoa(BasisKind::PCT, 0, 4, 8).sum());
  const double up_residual = std::abs(kernel_upsampled(BasisKind::PCT, 0, 4, 8, 8).sum());
  CHECK(up_residual < zoa_residual);
  CHECK(zoa_residual > 0.01);
}

TEST_CASE("Upsample(1) degenerates to ZOA bit-exactly") {
  for (BasisKind kind : {BasisKind::PCT, BasisKind::ZM, BasisKind::RHFM, BasisKind::EFM}) {
    const int n = kind == BasisKind::ZM ? 2 : 1;
    const int m = kind == BasisKind::ZM ? 2 : 1;
    const Kernel a = kernel_zoa(kind, n, m, 8);
    const Kernel b = kernel_upsampled(kind, n, m, 8, 1);
    REQUIRE(a.grid.data.size() == b.grid.data.size());
    for (size_t i = 0; i < a.grid.data.size(); ++i) CHECK(a.grid.data[i] == b.grid.data[i]);
  }
}

TEST_CASE("kernel support is confined to the disk") {
  for (int w : {4, 8, 16}) {
    const Kernel kernel = kernel_zoa(BasisKind::PCT, 1, 1, w);
    CHECK(kernel.grid.rows == 2 * w);
    CHECK(kernel.grid.cols == 2 * w);
    int in_disk = 0;
    for (int b = 0; b < 2 * w; ++b) {
      for (int a = 0; a < 2 * w; ++a) {
        const double dx = a + 0.5 - w, dy = b + 0.5 - w;
        const bool inside = dx * dx + dy * dy <= static_cast<double>(w) * w;
        if (inside) ++in_disk;
        if (!inside) CHECK(kernel.grid(b, a) == Cpx{0.0, 0.0});
      }
    }
    CHECK(kernel.support_count() == in_disk);
    CHECK(kernel.support_count() <= 4 * w * w);
  }
}

TEST_CASE("unity-image residual shrinks with the up-sampling rate") {
  // aggregate |kernel sum| over the K=20 infinity-norm set, m != 0
  const OrderSet set = order_set(BasisKind::PCT, OrderNorm::LInf, 20);
  double prev = std::numeric_limits<double>::infinity();
  for (int l : {1, 2, 4, 8}) {
    double total = 0.0;
    for (const OrderPair& p : set.pairs) {
      if (p.m == 0) continue;
      total += std::abs(make_kernel(BasisKind::PCT, p.n, p.m, 8,
                                    IntegrationStrategy::upsample(l))
                            .sum());
    }
    CHECK(total <= prev);
    prev = total;
  }
}

TEST_CASE("kernel spectrum: DC bin, zero kernel, and round trip") {
  const Kernel kernel = kernel_upsampled(BasisKind::PCT, 0, 0, 8, 4);
  const int size = 64;
  const CMat spec = kernel_spectrum(kernel, size, size);
  CHECK(std::abs(spec(0, 0) - kernel.sum()) <= 1e-12);

  Kernel zero = kernel;
  for (Cpx& z : zero.grid.data) z = 0.0;
  const CMat zspec = kernel_spectrum(zero, size, size);
  for (const Cpx& z : zspec.data) CHECK(std::abs(z) == 0.0);

  // inverse transform reproduces the wrapped kernel layout
  const CMat back = fftu::ifft2(spec);
  double max_diff = 0.0;
  for (int b = 0; b < 2 * 8; ++b) {
    for (int a = 0; a < 2 * 8; ++a) {
      const int row = ((8 - b) % size + size) % size;
      const int col = ((8 - a) % size + size) % size;
      max_diff = std::max(max_diff, std::abs(back(row, col) - kernel.grid(b, a)));
    }
  }
  CHECK(max_diff <= 1e-12);

  CHECK_THROWS_AS(kernel_spectrum(kernel, 8, 8), std::invalid_argument);
}

TEST_CASE("spectrum_rescale is the identity at w0 == w") {
  const Kernel kernel = kernel_zoa(BasisKind::PCT, 1, 1, 16);
  const CMat spec = kernel_spectrum(kernel, 96, 96);
  const CMat same = spectrum_rescale(spec, 16, 16);
  double max_diff = 0.0;
  for (size_t i = 0; i < spec.data.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(spec.data[i] - same.data[i]));
  }
  CHECK(max_diff <= 1e-12);
}

TEST_CASE("spectrum_rescale w0=16 -> w=32 tracks the directly computed spectrum") {
  // The fine-scale kernel's own out-of-band content (disk-edge tail plus
  // sampling aliases, ~16% of the spectrum norm for ZOA) is not derivable
  // from the coarse scale, so the full-band error bottoms out there; the
  // regression bound freezes the measured 0.218 with headroom. The usable
  // low band and everything downstream of an image product stay within 5%
  // (next test).
  const int size = 256;
  const CMat spec16 = kernel_spectrum(kernel_zoa(BasisKind::PCT, 1, 1, 16), size, size);
  const CMat spec32_direct = kernel_spectrum(kernel_zoa(BasisKind::PCT, 1, 1, 32), size, size);
  const CMat spec32_rescaled = spectrum_rescale(spec16, 16, 32);
  CHECK(rel_l2(spec32_rescaled, spec32_direct) <= 0.25);
}

TEST_CASE("rescaled spectra drive the dense path to within 5% end-to-end") {
  const GrayImage image = testutil::random_image(128, 128, 99);
  const int size = fftu::good_size(128 + 64);
  const CMat spec16 = kernel_spectrum(kernel_zoa(BasisKind::PCT, 1, 1, 16), size, size);
  const CMat spec32 = spectrum_rescale(spec16, 16, 32);
  const CMat direct = kernel_spectrum(kernel_zoa(BasisKind::PCT, 1, 1, 32), size, size);
  const CMat field_rescaled = dense_fft(image, spec32, 32);
  const CMat field_direct = dense_fft(image, direct, 32);
  CHECK(rel_l2(field_rescaled, field_direct) <= 0.05);
}

TEST_CASE("bank cardinality and byte-level determinism") {
  const OrderSet orders = order_set(BasisKind::PCT, OrderNorm::L1, 3);
  REQUIRE(orders.pairs.size() == 10);
  const std::vector<int> scales = {8, 10, 12, 14, 16, 18, 20, 22, 24, 26};
  const KernelBank bank =
      bank_build(BasisKind::PCT, orders, scales, 96, 96, IntegrationStrategy::zoa(), false);
  CHECK(bank.entry_count() == 100);

  const KernelBank again =
      bank_build(BasisKind::PCT, orders, scales, 96, 96, IntegrationStrategy::zoa(), false);
  CHECK(bank_to_bytes(bank) == bank_to_bytes(again));

  // concurrent construction must not change a single byte
  const KernelBank threaded =
      bank_build(BasisKind::PCT, orders, scales, 96, 96, IntegrationStrategy::zoa(), false, 4);
  CHECK(bank_to_bytes(bank) == bank_to_bytes(threaded));
}

TEST_CASE("rescale-backed bank tracks the direct build") {
  OrderSet orders;
  orders.kind = BasisKind::PCT;
  orders.pairs = {{0, 0}, {1, 1}, {2, 1}};
  const std::vector<int> scales = {16, 24, 32};
  const KernelBank direct =
      bank_build(BasisKind::PCT, orders, scales, 192, 192, IntegrationStrategy::zoa(), false);
  const KernelBank derived =
      bank_build(BasisKind::PCT, orders, scales, 192, 192, IntegrationStrategy::zoa(), true);
  for (const OrderPair& p : orders.pairs) {
    for (int w : scales) {
      // same out-of-band floor as the single-spectrum rescale test
      CHECK(rel_l2(*derived.find(p.n, p.m, w), *direct.find(p.n, p.m, w)) <= 0.25);
    }
  }
  // what the derived bank must preserve: dense fields driven by its spectra.
  // Integer scale ratios sample the source grid exactly (measured 4.5% at
  // w=32); fractional ratios add interpolation error (6.6% at w=24), so the
  // per-scale bound freezes the worst measured case with headroom.
  const GrayImage probe = testutil::random_image(128, 128, 3);
  for (int w : scales) {
    const CMat f_direct = dense_fft(probe, *direct.find(1, 1, w), w);
    const CMat f_derived = dense_fft(probe, *derived.find(1, 1, w), w);
    CHECK(rel_l2(f_derived, f_direct) <= 0.10);
  }
}

TEST_CASE("bank save/load round trip is byte-faithful") {
  OrderSet orders;
  orders.kind = BasisKind::ZM;
  orders.pairs = {{0, 0}, {1, 1}};
  const KernelBank bank =
      bank_build(BasisKind::ZM, orders, {8, 12}, 48, 48, IntegrationStrategy::upsample(2), false);
  const auto path = std::filesystem::temp_directory_path() / "dir_test_bank.dirb";
  bank_save(path.string(), bank);
  const KernelBank loaded = bank_load(path.string());
  CHECK(bank_to_bytes(loaded) == bank_to_bytes(bank));
  std::filesystem::remove(path);

  CHECK_THROWS(bank_build(BasisKind::PCT, orders, {}, 48, 48, IntegrationStrategy::zoa(), false));
  CHECK_THROWS_AS(
      bank_build(BasisKind::PCT, orders, {30}, 48, 48, IntegrationStrategy::zoa(), false),
      std::invalid_argument);
}
