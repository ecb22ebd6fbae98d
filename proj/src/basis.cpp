#include "dir/basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace dir {

namespace {

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// log(k!) via lgamma; exact enough for the capped OFMM orders.
double log_fact(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// Zernike radial coefficients over s = r^2: R = r^{|m|} * sum_j c_j s^j.
std::vector<double> zm_coeffs(int n, int abs_m) {
  const int half = (n - abs_m) / 2;
  std::vector<double> c(static_cast<size_t>(half) + 1, 0.0);
  const double norm = std::sqrt((n + 1.0) / kPi);
  for (int k = 0; k <= half; ++k) {
    // term exponent n - 2k = abs_m + 2j  =>  j = half - k
    const double lg = log_fact(n - k) - log_fact(k) - log_fact((n + abs_m) / 2 - k) -
                      log_fact((n - abs_m) / 2 - k);
    c[half - k] = norm * sign_pow(k) * std::exp(lg);
  }
  return c;
}

// OFMM radial coefficients over r ascending.
std::vector<double> ofmm_coeffs(int n) {
  std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
  const double norm = std::sqrt((n + 1.0) / kPi);
  for (int k = 0; k <= n; ++k) {
    const double lg = log_fact(n + k + 1) - log_fact(k) - log_fact(n - k) - log_fact(k + 1);
    c[k] = norm * sign_pow(n + k) * std::exp(lg);
  }
  return c;
}

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// Gauss-Legendre nodes/weights on [0,1], cached per point count.
struct GlRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GlRule& gl_rule(int npts) {
  static std::mutex mu;
  static std::map<int, GlRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(npts);
  if (it != cache.end()) return it->second;

  GlRule rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  const int half = (npts + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton from the Chebyshev-like initial guess on [-1,1].
    double x = std::cos(kPi * (i + 0.75) / (npts + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < npts; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = npts * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double wgt = 2.0 / ((1.0 - x * x) * pp * pp);
    // map [-1,1] -> [0,1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 0.5 * wgt;
    rule.nodes[npts - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[npts - 1 - i] = 0.5 * wgt;
  }
  return cache.emplace(npts, std::move(rule)).first->second;
}

} // namespace

const char* basis_name(BasisKind kind) {
  switch (kind) {
    case BasisKind::PCT: return "pct";
    case BasisKind::PCET: return "pcet";
    case BasisKind::PST: return "pst";
    case BasisKind::ZM: return "zm";
    case BasisKind::OFMM: return "ofmm";
    case BasisKind::EFM: return "efm";
    case BasisKind::RHFM: return "rhfm";
  }
  return "?";
}

BasisKind basis_from_name(const std::string& name) {
  std::string s;
  for (char ch : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (s == "pct") return BasisKind::PCT;
  if (s == "pcet") return BasisKind::PCET;
  if (s == "pst") return BasisKind::PST;
  if (s == "zm") return BasisKind::ZM;
  if (s == "ofmm") return BasisKind::OFMM;
  if (s == "efm") return BasisKind::EFM;
  if (s == "rhfm") return BasisKind::RHFM;
  throw std::invalid_argument("unknown basis kind: " + name);
}

bool order_valid(BasisKind kind, int n, int m) {
  switch (kind) {
    case BasisKind::PCT:
    case BasisKind::RHFM:
      return n >= 0;
    case BasisKind::PST:
      return n >= 1; // R_0 is identically zero
    case BasisKind::PCET:
    case BasisKind::EFM:
      return true; // any integer n; order sets enumerate n >= 0 only
    case BasisKind::ZM:
      return n >= 0 && std::abs(m) <= n && (n - std::abs(m)) % 2 == 0;
    case BasisKind::OFMM:
      return n >= 0 && n <= kOfmmMaxOrder;
  }
  return false;
}

void require_valid_order(BasisKind kind, int n, int m) {
  if (!order_valid(kind, n, m)) {
    std::ostringstream msg;
    msg << "invalid order (n=" << n << ", m=" << m << ") for basis " << basis_name(kind);
    throw std::invalid_argument(msg.str());
  }
}

Cpx angular_eval(int m, double theta) {
  const double a = m * theta;
  return {std::cos(a), std::sin(a)};
}

RadialEvaluator::RadialEvaluator(BasisKind kind, int n, int m)
    : kind_(kind), n_(n), abs_m_(std::abs(m)) {
  require_valid_order(kind, n, m);
  if (kind == BasisKind::ZM) {
    coeffs_ = zm_coeffs(n, abs_m_);
  } else if (kind == BasisKind::OFMM) {
    coeffs_ = ofmm_coeffs(n);
  }
}

Cpx RadialEvaluator::operator()(double r) const {
  switch (kind_) {
    case BasisKind::PCT:
      if (n_ == 0) return {1.0 / std::sqrt(kPi), 0.0};
      return {std::sqrt(2.0 / kPi) * std::cos(n_ * kPi * r * r), 0.0};
    case BasisKind::PST:
      return {std::sqrt(2.0 / kPi) * std::sin(n_ * kPi * r * r), 0.0};
    case BasisKind::PCET: {
      const double a = 2.0 * n_ * kPi * r * r;
      const double s = 1.0 / std::sqrt(kPi);
      return {s * std::cos(a), s * std::sin(a)};
    }
    case BasisKind::RHFM: {
      const double rc = std::max(r, kRadialFloor);
      if (n_ == 0) return {1.0 / std::sqrt(kTwoPi * rc), 0.0};
      const double s = std::sqrt(1.0 / (kPi * rc));
      if (n_ % 2 == 1) return {s * std::sin(kPi * (n_ + 1) * r), 0.0};
      return {s * std::cos(kPi * n_ * r), 0.0};
    }
    case BasisKind::EFM: {
      const double rc = std::max(r, kRadialFloor);
      const double s = 1.0 / std::sqrt(kTwoPi * rc);
      const double a = 2.0 * n_ * kPi * r;
      return {s * std::cos(a), s * std::sin(a)};
    }
    case BasisKind::ZM: {
      const double s = r * r;
      double val = horner(coeffs_, s);
      for (int i = 0; i < abs_m_; ++i) val *= r;
      return {val, 0.0};
    }
    case BasisKind::OFMM:
      return {horner(coeffs_, r), 0.0};
  }
  return {0.0, 0.0};
}

Cpx radial_eval(BasisKind kind, int n, int m, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("radial_eval: r outside [0,1]");
  return RadialEvaluator(kind, n, m)(r);
}

Cpx basis_eval(BasisKind kind, int n, int m, const LocalFrame& frame, double x, double y) {
  require_valid_order(kind, n, m);
  const double dx = x - frame.u;
  const double dy = y - frame.v;
  const double d2 = dx * dx + dy * dy;
  const double w2 = frame.w * frame.w;
  if (d2 > w2 * (1.0 + 1e-12)) throw std::domain_error("basis_eval: point outside frame disk");
  const double r = std::min(1.0, std::sqrt(d2) / frame.w);
  double theta = std::atan2(dy, dx);
  if (theta < 0.0) theta += kTwoPi;
  return RadialEvaluator(kind, n, m)(r)*angular_eval(m, theta);
}

OrderSet order_set(BasisKind kind, OrderNorm norm, int bound) {
  if (bound < 0) throw std::invalid_argument("order_set: bound must be >= 0");
  OrderSet set;
  set.kind = kind;
  set.norm = norm;
  set.bound = bound;
  for (int n = 0; n <= bound; ++n) {
    for (int m = 0; m <= bound; ++m) {
      if (norm == OrderNorm::L1 && n + m > bound) continue;
      if (!order_valid(kind, n, m)) continue;
      set.pairs.push_back({n, m});
    }
  }
  return set;
}

double radial_orthogonality(BasisKind kind, int n, int n2, int m_context, int quad_points) {
  if (quad_points < 64) throw std::invalid_argument("radial_orthogonality: quad_points < 64");
  RadialEvaluator ra(kind, n, m_context);
  RadialEvaluator rb(kind, n2, m_context);
  const GlRule& rule = gl_rule(quad_points);
  double acc = 0.0;
  for (int i = 0; i < quad_points; ++i) {
    const double r = rule.nodes[i];
    const Cpx prod = ra(r) * std::conj(rb(r));
    acc += rule.weights[i] * prod.real() * r;
  }
  return acc;
}

} // namespace dir
