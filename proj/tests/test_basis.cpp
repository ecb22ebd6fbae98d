#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dir/basis.hpp"

#include <cmath>

using namespace dir;

TEST_CASE("angular basis is the unit-modulus exponential") {
  CHECK(std::abs(angular_eval(0, 1.234) - Cpx{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(angular_eval(1, kPi / 2.0) - Cpx{0.0, 1.0}) < 1e-15);
  CHECK(std::abs(angular_eval(-3, 0.7) - std::conj(angular_eval(3, 0.7))) < 1e-15);
  for (int m : {-5, -1, 0, 2, 7}) {
    for (double theta : {0.0, 0.3, 2.0, 5.9}) {
      CHECK(std::abs(std::abs(angular_eval(m, theta)) - 1.0) < 1e-14);
      CHECK(std::abs(angular_eval(m, theta + kTwoPi) - angular_eval(m, theta)) < 1e-12);
    }
  }
}

TEST_CASE("radial closed forms match hand-evaluated values") {
  CHECK(radial_eval(BasisKind::PCT, 0, 0, 0.5).real() == doctest::Approx(1.0 / std::sqrt(kPi)));
  CHECK(radial_eval(BasisKind::PCT, 2, 0, 0.0).real() ==
        doctest::Approx(std::sqrt(2.0 / kPi)));
  // ZM(2,0) evaluates sqrt(3/pi) * (2 r^2 - 1)
  CHECK(radial_eval(BasisKind::ZM, 2, 0, 1.0).real() == doctest::Approx(std::sqrt(3.0 / kPi)));
  CHECK(radial_eval(BasisKind::ZM, 2, 0, 0.0).real() == doctest::Approx(-std::sqrt(3.0 / kPi)));
  // PST(1) = sqrt(2/pi) sin(pi r^2)
  CHECK(radial_eval(BasisKind::PST, 1, 0, std::sqrt(0.5)).real() ==
        doctest::Approx(std::sqrt(2.0 / kPi)));
  // PCET is complex with constant modulus 1/sqrt(pi)
  const Cpx pcet = radial_eval(BasisKind::PCET, 3, 0, 0.37);
  CHECK(std::abs(pcet) == doctest::Approx(1.0 / std::sqrt(kPi)));
}

TEST_CASE("invalid orders are rejected") {
  CHECK_THROWS_AS(radial_eval(BasisKind::PST, 0, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(radial_eval(BasisKind::ZM, 2, 1, 0.5), std::invalid_argument); // parity
  CHECK_THROWS_AS(radial_eval(BasisKind::ZM, 1, 3, 0.5), std::invalid_argument); // |m| > n
  CHECK_THROWS_AS(radial_eval(BasisKind::OFMM, kOfmmMaxOrder + 1, 0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(radial_eval(BasisKind::PCT, 1, 0, 1.5), std::domain_error);
}

TEST_CASE("RHFM/EFM stay finite at the clamped origin") {
  for (int n : {0, 1, 2, 5}) {
    CHECK(std::isfinite(radial_eval(BasisKind::RHFM, n, 0, 0.0).real()));
    CHECK(std::isfinite(std::abs(radial_eval(BasisKind::EFM, n, 0, 0.0))));
  }
}

TEST_CASE("basis_eval composes radial and angular factors in the local frame") {
  const LocalFrame unit{0.0, 0.0, 1.0};
  const Cpx v = basis_eval(BasisKind::PCT, 0, 0, unit, 0.3, 0.4);
  CHECK(std::abs(v - radial_eval(BasisKind::PCT, 0, 0, 0.5)) < 1e-15);

  const Cpx v_up = basis_eval(BasisKind::PCT, 0, 1, unit, 0.0, 0.5);
  const Cpx expected = radial_eval(BasisKind::PCT, 0, 1, 0.5) * angular_eval(1, kPi / 2.0);
  CHECK(std::abs(v_up - expected) < 1e-14);

  // Frame normalization: same local coordinates, different global frame.
  const Cpx v_shifted = basis_eval(BasisKind::PCT, 0, 1, {2.0, 2.0, 2.0}, 2.0, 3.0);
  CHECK(std::abs(v_shifted - v_up) < 1e-14);

  CHECK_THROWS_AS(basis_eval(BasisKind::PCT, 0, 0, unit, 1.2, 0.0), std::domain_error);
}

TEST_CASE("order sets have the documented sizes and deterministic order") {
  CHECK(order_set(BasisKind::PCT, OrderNorm::LInf, 3).pairs.size() == 16);
  CHECK(order_set(BasisKind::PCT, OrderNorm::L1, 3).pairs.size() == 10);
  CHECK(order_set(BasisKind::PCT, OrderNorm::LInf, 5).pairs.size() == 36);

  const OrderSet zm = order_set(BasisKind::ZM, OrderNorm::LInf, 3);
  CHECK(zm.pairs == std::vector<OrderPair>{{0, 0}, {1, 1}, {2, 0}, {2, 2}, {3, 1}, {3, 3}});

  const OrderSet pst = order_set(BasisKind::PST, OrderNorm::LInf, 3);
  for (const OrderPair& p : pst.pairs) CHECK(p.n >= 1);
  CHECK(pst.pairs.size() == 12);

  // lexicographic ordering
  const OrderSet set = order_set(BasisKind::PCT, OrderNorm::L1, 4);
  for (size_t i = 1; i < set.pairs.size(); ++i) CHECK(set.pairs[i - 1] < set.pairs[i]);
}

TEST_CASE("radial families are orthogonal under the r-weighted inner product") {
  const double target_diag = 1.0 / kTwoPi;
  struct Probe {
    BasisKind kind;
    int max_n;
    int min_n;
    int m;
  };
  const Probe probes[] = {
      {BasisKind::PCT, 10, 0, 0},  {BasisKind::PCET, 10, 0, 0}, {BasisKind::PST, 10, 1, 0},
      {BasisKind::OFMM, 8, 0, 0},  {BasisKind::EFM, 10, 0, 0},  {BasisKind::RHFM, 10, 0, 0},
  };
  for (const Probe& probe : probes) {
    CAPTURE(basis_name(probe.kind));
    for (int n = probe.min_n; n <= probe.max_n; ++n) {
      for (int n2 = probe.min_n; n2 <= probe.max_n; ++n2) {
        const double got = radial_orthogonality(probe.kind, n, n2, probe.m, 4096);
        const double want = n == n2 ? target_diag : 0.0;
        CHECK(std::abs(got - want) <= 1e-6);
      }
    }
  }
  // ZM radials share m within a family; check a few m slices up to n = 10.
  for (int m : {0, 1, 2}) {
    for (int n = m; n <= 10; n += 2) {
      for (int n2 = m; n2 <= 10; n2 += 2) {
        const double got = radial_orthogonality(BasisKind::ZM, n, n2, m, 4096);
        const double want = n == n2 ? target_diag : 0.0;
        CHECK(std::abs(got - want) <= 1e-6);
      }
    }
  }
}

TEST_CASE("spec example: ZM cross-order quadrature oracle") {
  CHECK(std::abs(radial_orthogonality(BasisKind::ZM, 2, 0, 0, 4096)) <= 1e-6);
  CHECK(radial_orthogonality(BasisKind::PCT, 3, 3, 0, 4096) ==
        doctest::Approx(1.0 / kTwoPi).epsilon(1e-6));
  CHECK(std::abs(radial_orthogonality(BasisKind::PCT, 1, 2, 0, 4096)) <= 1e-6);
}
