#ifndef DIR_BASIS_HPP
#define DIR_BASIS_HPP

#include "dir/types.hpp"

#include <iosfwd>

namespace dir {

// Radial basis families evaluated from their closed forms. ZM couples the
// radial profile to the angular repetition m; all the others depend on n only.
enum class BasisKind : uint32_t { PCT = 0, PCET, PST, ZM, OFMM, EFM, RHFM };

const char* basis_name(BasisKind kind);
BasisKind basis_from_name(const std::string& name); // case-insensitive, throws on unknown

// RHFM/EFM have an integrable 1/sqrt(r) singularity at the origin; pointwise
// evaluation clamps the radius to this floor.
constexpr double kRadialFloor = 1e-6;
constexpr int kOfmmMaxOrder = 20;

struct OrderPair {
  int n = 0;
  int m = 0;
  friend bool operator==(const OrderPair&, const OrderPair&) = default;
  friend auto operator<=>(const OrderPair&, const OrderPair&) = default;
};

enum class OrderNorm { L1, LInf };

// All kind-valid (n,m), m >= 0, with ||(n,m)||_p <= K, in lexicographic order.
struct OrderSet {
  BasisKind kind = BasisKind::PCT;
  OrderNorm norm = OrderNorm::LInf;
  int bound = 0;
  std::vector<OrderPair> pairs;
};

// Local evaluation frame: disk of radius w centered at (u, v).
struct LocalFrame {
  double u = 0.0;
  double v = 0.0;
  double w = 1.0;
};

bool order_valid(BasisKind kind, int n, int m);
void require_valid_order(BasisKind kind, int n, int m); // throws std::invalid_argument

// exp(j*m*theta)
Cpx angular_eval(int m, double theta);

// R_n(r) on r in [0,1]. m participates only for ZM (via |m|).
Cpx radial_eval(BasisKind kind, int n, int m, double r);

// V_nm^{uvw}(x, y) = R_n(r') * A_m(theta') with the frame-local polar
// coordinates of Eq.-style normalization; throws std::domain_error when
// (x, y) falls outside the frame disk.
Cpx basis_eval(BasisKind kind, int n, int m, const LocalFrame& frame, double x, double y);

OrderSet order_set(BasisKind kind, OrderNorm norm, int bound);

// Gauss-Legendre estimate of Re( integral_0^1 R_n(r) R_{n2}(r)^* r dr ).
// For a weighted-orthonormal family this is delta_{n n2} / (2*pi).
// m_context feeds the ZM radial profile and is ignored otherwise.
double radial_orthogonality(BasisKind kind, int n, int n2, int m_context, int quad_points);

// Precomputes per-(kind, n, m) polynomial coefficients so that tight loops
// (kernel discretization) avoid re-deriving factorial terms per sample.
class RadialEvaluator {
 public:
  RadialEvaluator(BasisKind kind, int n, int m);
  Cpx operator()(double r) const;

 private:
  BasisKind kind_;
  int n_;
  int abs_m_;
  std::vector<double> coeffs_; // ZM: over r^2 ascending; OFMM: over r ascending
};

} // namespace dir

#endif
