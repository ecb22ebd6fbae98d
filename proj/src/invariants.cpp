#include "dir/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dir {

FeatureField magnitude_features(const MomentField& field, const OrderSet& orders, int w) {
  FeatureField out;
  out.width = field.width;
  out.height = field.height;
  out.dim = static_cast<int>(orders.pairs.size());
  out.orders = orders.pairs;
  out.scales = {w};
  out.data.assign(static_cast<size_t>(out.width) * out.height * out.dim, 0.0);
  out.valid.assign(static_cast<size_t>(out.width) * out.height, 0);

  std::vector<const CMat*> mats;
  mats.reserve(orders.pairs.size());
  for (const OrderPair& pair : orders.pairs) mats.push_back(&field.channel(pair.n, pair.m, w));

  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      double* vec = &out.data[(static_cast<size_t>(y) * out.width + x) * out.dim];
      for (int k = 0; k < out.dim; ++k) vec[k] = std::abs((*mats[k])(y, x));
      out.valid[static_cast<size_t>(y) * out.width + x] = field.interior(x, y, w) ? 1 : 0;
    }
  }
  return out;
}

std::vector<FeatureField> magnitude_features_all(const MomentField& field,
                                                 const OrderSet& orders,
                                                 const std::vector<int>& scales) {
  std::vector<int> ws = scales;
  std::sort(ws.begin(), ws.end());
  std::vector<FeatureField> out;
  out.reserve(ws.size());
  for (int w : ws) out.push_back(magnitude_features(field, orders, w));
  return out;
}

FeatureField pool_scales(const std::vector<const FeatureField*>& fields, PoolMode mode) {
  if (fields.empty()) throw std::invalid_argument("pool_scales: no input fields");
  const FeatureField& first = *fields.front();
  for (const FeatureField* f : fields) {
    if (f->width != first.width || f->height != first.height || f->dim != first.dim ||
        f->orders != first.orders) {
      throw std::invalid_argument("pool_scales: field shape/order mismatch");
    }
  }

  // canonical accumulation order: ascending scale
  std::vector<const FeatureField*> sorted = fields;
  std::sort(sorted.begin(), sorted.end(), [](const FeatureField* a, const FeatureField* b) {
    return a->scales < b->scales;
  });

  FeatureField out;
  out.width = first.width;
  out.height = first.height;
  out.dim = first.dim;
  out.orders = first.orders;
  for (const FeatureField* f : sorted) {
    out.scales.insert(out.scales.end(), f->scales.begin(), f->scales.end());
  }
  const size_t n = static_cast<size_t>(out.width) * out.height * out.dim;
  out.data.assign(n, mode == PoolMode::Max ? -std::numeric_limits<double>::infinity() : 0.0);
  out.valid.assign(static_cast<size_t>(out.width) * out.height, 1);

  for (const FeatureField* f : sorted) {
    if (mode == PoolMode::Average) {
      for (size_t i = 0; i < n; ++i) out.data[i] += f->data[i];
    } else {
      for (size_t i = 0; i < n; ++i) out.data[i] = std::max(out.data[i], f->data[i]);
    }
    for (size_t i = 0; i < out.valid.size(); ++i) out.valid[i] &= f->valid[i];
  }
  if (mode == PoolMode::Average) {
    const double inv = 1.0 / static_cast<double>(sorted.size());
    for (double& v : out.data) v *= inv;
  }
  return out;
}

FeatureField pool_scales(const std::vector<FeatureField>& fields, PoolMode mode) {
  std::vector<const FeatureField*> ptrs;
  ptrs.reserve(fields.size());
  for (const FeatureField& f : fields) ptrs.push_back(&f);
  return pool_scales(ptrs, mode);
}

Cpx rotation_predict(Cpx z, int m, double phi) {
  return z * angular_eval(m, phi);
}

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > kPi) a -= kTwoPi;
  if (a <= -kPi) a += kTwoPi;
  return a;
}

} // namespace

double estimate_rotation(std::span<const Cpx> a, std::span<const Cpx> b, const OrderSet& orders) {
  if (a.size() != b.size() || a.size() != orders.pairs.size()) {
    throw std::invalid_argument("estimate_rotation: vector/order-set size mismatch");
  }

  struct Term {
    double delta; // arg(b) - arg(a)
    int m;
    double weight;
  };
  std::vector<Term> terms;
  double total_weight = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    const int m = orders.pairs[k].m;
    if (m == 0) continue;
    const double weight = std::abs(a[k]) * std::abs(b[k]);
    if (weight <= 0.0) continue;
    terms.push_back({std::arg(b[k]) - std::arg(a[k]), m, weight});
    total_weight += weight;
  }
  if (terms.empty() || total_weight < 1e-12) {
    throw std::domain_error("estimate_rotation: degenerate input (no usable m != 0 terms)");
  }

  auto objective = [&](double phi) {
    double acc = 0.0;
    for (const Term& t : terms) {
      const double e = wrap_angle(t.delta - t.m * phi);
      acc += t.weight * e * e;
    }
    return acc;
  };

  constexpr int kBins = 1024;
  double best_phi = 0.0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kBins; ++i) {
    const double phi = (i + 0.5) * kTwoPi / kBins;
    const double val = objective(phi);
    if (val < best_val) {
      best_val = val;
      best_phi = phi;
    }
  }

  // golden-section refinement inside +-1 bin
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_phi - kTwoPi / kBins;
  double hi = best_phi + kTwoPi / kBins;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = objective(x2);
    }
  }
  double phi = 0.5 * (lo + hi);
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  return phi;
}

} // namespace dir
