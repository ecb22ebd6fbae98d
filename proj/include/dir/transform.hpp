#ifndef DIR_TRANSFORM_HPP
#define DIR_TRANSFORM_HPP

#include "dir/kernel.hpp"
#include "dir/types.hpp"

namespace dir {

struct ChannelKey {
  int n = 0;
  int m = 0;
  int w = 1;
  friend bool operator==(const ChannelKey&, const ChannelKey&) = default;
};

// Dense complex coefficients per (n, m, w) channel, one matrix entry per
// position (u, v) of the image grid. Entries closer than w to a border are
// computed against the zero-padded image and are flagged non-interior; the
// two facts together keep the fast paths bit-comparable everywhere while
// feature extraction can mask the border.
struct MomentField {
  int width = 0;
  int height = 0;
  BasisKind kind = BasisKind::PCT;
  std::vector<ChannelKey> keys;
  std::vector<CMat> channels;

  const CMat& channel(int n, int m, int w) const; // throws on missing channel
  bool interior(int x, int y, int w) const {
    return x >= w && x <= width - w && y >= w && y <= height - w;
  }
};

enum class DensePath { Spatial, Fft };

// Direct evaluation of one coefficient: sum of kernel taps against image
// samples for a frame centered at integer (u, v). Ground truth for the dense
// paths. Throws std::domain_error when the disk does not fit in the image.
Cpx moments_at(const GrayImage& image, BasisKind kind, int n, int m, const LocalFrame& frame,
               IntegrationStrategy strategy);
Cpx moments_at(const GrayImage& image, const Kernel& kernel, int u, int v);

// Sliding-window evaluation over every (u, v); reads outside the image are
// zero, matching the zero-padded FFT path.
CMat dense_spatial(const GrayImage& image, const Kernel& kernel);

// Frequency-domain evaluation against a precomputed kernel spectrum. The
// spectrum must be at least (width + 2w) x (height + 2w).
CMat dense_fft(const GrayImage& image, const CMat& spectrum, int w);

// Full decomposition over an order set and scale list.
MomentField decompose(const GrayImage& image, BasisKind kind, const OrderSet& orders,
                      const std::vector<int>& scales, IntegrationStrategy strategy,
                      DensePath path, const KernelBank* bank = nullptr, int threads = 1);

} // namespace dir

#endif
