#ifndef DIR_KERNEL_HPP
#define DIR_KERNEL_HPP

#include "dir/basis.hpp"
#include "dir/types.hpp"

namespace dir {

// How the conjugate basis is integrated over each pixel region.
// Upsample(l) averages l*l equally-weighted sub-samples per pixel;
// ZOA is the single-center-sample special case (identical to Upsample(1)).
struct IntegrationStrategy {
  enum class Mode : uint32_t { ZOA = 0, Upsample = 1 };
  Mode mode = Mode::ZOA;
  int l_side = 1;

  static IntegrationStrategy zoa() { return {Mode::ZOA, 1}; }
  static IntegrationStrategy upsample(int l_side);

  // Serialization code: 0 for ZOA, l_side otherwise.
  uint32_t code() const { return mode == Mode::ZOA ? 0u : static_cast<uint32_t>(l_side); }
  static IntegrationStrategy from_code(uint32_t code);
  std::string name() const;

  friend bool operator==(const IntegrationStrategy&, const IntegrationStrategy&) = default;
};

// Discretized conjugate basis over a 2w x 2w pixel grid. Pixel (a, b)
// (0-based col a = x, row b = y) has its center at (a + 0.5, b + 0.5) and the
// disk is centered at (w, w) with radius w, so pixel centers sit at
// half-integer offsets from the disk center and the support never exceeds
// 4*w^2 entries. Values carry the 1/w^2 area normalization.
struct Kernel {
  BasisKind kind = BasisKind::PCT;
  int n = 0;
  int m = 0;
  int w = 1;
  IntegrationStrategy strategy;
  CMat grid; // 2w x 2w, grid(row=b, col=a)

  Cpx sum() const;
  int support_count() const; // number of nonzero entries
};

Kernel kernel_zoa(BasisKind kind, int n, int m, int w);
Kernel kernel_upsampled(BasisKind kind, int n, int m, int w, int l_side);
Kernel make_kernel(BasisKind kind, int n, int m, int w, IntegrationStrategy strategy);

// DFT of the kernel laid out so that ifft2(fft2(padded image) .* spectrum)
// reproduces the direct sum of the dense path at every position.
// spec_cols/spec_rows are the padded dimensions M0 x N0 (>= 2w each).
CMat kernel_spectrum(const Kernel& kernel, int spec_cols, int spec_rows);

// Derives the spectrum at scale w from the one computed at scale w0 by
// sampling the source at frequencies scaled by w/w0 (bilinear on the
// DC-centered grid, out-of-band frequencies map to zero). The half-pixel
// phase ramp shared by all kernel spectra is removed before interpolation
// and re-applied afterwards. Identity when w == w0.
CMat spectrum_rescale(const CMat& spectrum_w0, int w0, int w);

// Precomputed spectra indexed by (n, m, w), all at one padded size.
// Content depends only on the build inputs, never on image data.
struct KernelBank {
  BasisKind kind = BasisKind::PCT;
  IntegrationStrategy strategy;
  int spec_cols = 0; // M0
  int spec_rows = 0; // N0
  std::vector<OrderPair> orders;
  std::vector<int> scales;
  std::vector<CMat> spectra; // ordered: orders-major, scales-minor

  const CMat* find(int n, int m, int w) const; // nullptr when absent
  size_t entry_count() const { return spectra.size(); }
};

KernelBank bank_build(BasisKind kind, const OrderSet& orders, const std::vector<int>& scales,
                      int spec_cols, int spec_rows, IntegrationStrategy strategy,
                      bool use_rescale, int threads = 1);

} // namespace dir

#endif
