#ifndef DIR_INVARIANTS_HPP
#define DIR_INVARIANTS_HPP

#include "dir/transform.hpp"

#include <span>

namespace dir {

enum class PoolMode { Average, Max };

// Per-position real feature vectors (coefficient magnitudes) in the order-set
// ordering. Positions closer than the governing scale to a border are masked
// invalid and must not enter comparisons.
struct FeatureField {
  int width = 0;
  int height = 0;
  int dim = 0;
  std::vector<OrderPair> orders;
  std::vector<int> scales; // single entry, or the pooled-over set
  std::vector<double> data;
  std::vector<uint8_t> valid;

  std::span<const double> at(int x, int y) const {
    return {&data[(static_cast<size_t>(y) * width + x) * dim], static_cast<size_t>(dim)};
  }
  bool is_valid(int x, int y) const { return valid[static_cast<size_t>(y) * width + x] != 0; }
};

// Magnitude features for one scale of the field. Throws when a channel of
// orders x {w} is absent.
FeatureField magnitude_features(const MomentField& field, const OrderSet& orders, int w);

// One field per scale present in the moment field, ascending w.
std::vector<FeatureField> magnitude_features_all(const MomentField& field,
                                                 const OrderSet& orders,
                                                 const std::vector<int>& scales);

// Permutation-invariant pooling across scales. Average accumulates in
// ascending-scale order so the output is byte-identical under any input
// permutation. Valid mask is the intersection of the inputs.
FeatureField pool_scales(const std::vector<const FeatureField*>& fields, PoolMode mode);
FeatureField pool_scales(const std::vector<FeatureField>& fields, PoolMode mode);

// Phase law of rotation covariance: z * exp(j*m*phi).
Cpx rotation_predict(Cpx z, int m, double phi);

// Weighted phase-consensus estimate of the rotation angle relating two
// same-order moment vectors; 1024-bin grid search plus golden-section
// refinement, result in [0, 2*pi). Throws std::domain_error when every m is 0
// or the weight mass is negligible.
double estimate_rotation(std::span<const Cpx> a, std::span<const Cpx> b, const OrderSet& orders);

} // namespace dir

#endif
