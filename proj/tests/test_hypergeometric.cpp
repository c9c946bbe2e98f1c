#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lame/hypergeometric.hpp"
#include "test_support.hpp"

using namespace lame;

namespace {
const IndicialRoot L0 = IndicialRoot::first_kind();
const IndicialRoot LH = IndicialRoot::second_kind();
}  // namespace

TEST_CASE("pochhammer") {
  CHECK(pochhammer(3.7, 0) == 1.0);
  CHECK(pochhammer(-1.0, 2) == 0.0);
  CHECK(pochhammer(1.25, 3) == doctest::Approx(585.0 / 64).epsilon(1e-15));
  CHECK(pochhammer(1.0, 5) == 120.0);
  CHECK_THROWS_AS(pochhammer(1.0, -1), DomainError);
  testing::ParamSampler s(31);
  for (int t = 0; t < 200; ++t) {
    const double x = s.uniform(-4, 4);
    const int m = static_cast<int>(s.uniform(0, 15));
    const int n = static_cast<int>(s.uniform(0, 15));
    const double lhs = pochhammer(x, m + n);
    const double rhs = pochhammer(x, m) * pochhammer(x + m, n);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1e-300));
  }
}

TEST_CASE("beta_fn") {
  CHECK(beta_fn(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  for (int n = 1; n <= 10; ++n) CHECK(beta_fn(1, n) == doctest::Approx(1.0 / n).epsilon(1e-14));
  CHECK(beta_fn(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK_THROWS_AS(beta_fn(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(beta_fn(1.0, -2.0), DomainError);
  testing::ParamSampler s(32);
  for (int t = 0; t < 200; ++t) {
    const double p = s.uniform(0.05, 8), q = s.uniform(0.05, 8);
    CHECK(beta_fn(p, q) == doctest::Approx(beta_fn(q, p)).epsilon(1e-14));
    CHECK(beta_fn(p, q + 1) == doctest::Approx(beta_fn(p, q) * q / (p + q)).epsilon(1e-12));
  }
}

TEST_CASE("gauss_2f1") {
  for (double z : {-0.9, -0.3, 0.2, 0.8, 3.0}) {
    CHECK(gauss_2f1({-1, 1.25, 0.75, z}, {}) == doctest::Approx(1 - 5.0 / 3.0 * z).epsilon(1e-15));
  }
  CHECK(gauss_2f1({0.3, -2.7, 1.9, 0.0}, {}) == 1.0);
  CHECK(gauss_2f1({1, 1, 1, 0.5}, {0, 200, 1e-16}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(gauss_2f1({1, 1, 1, 1.0}, {}), DivergenceError);
  CHECK_THROWS_AS(gauss_2f1({0.5, 1, -2, 0.1}, {}), DomainError);
  CHECK_NOTHROW(gauss_2f1({-1, 1, -2, 0.1}, {}));
  // log(1+z) = z 2F1(1, 1; 2; -z)
  CHECK(0.4 * gauss_2f1({1, 1, 2, -0.4}, {0, 400, 1e-17}) ==
        doctest::Approx(std::log1p(0.4)).epsilon(1e-14));
  // Terminating: extra terms change nothing.
  for (int N = 0; N <= 6; ++N) {
    const Hyp2F1Args a{-static_cast<double>(N), 2.3, 0.7, -0.6};
    const double v1 = gauss_2f1(a, {0, N + 1, 1e-300});
    const double v2 = gauss_2f1(a, {0, N + 50, 1e-300});
    CHECK(v1 == v2);
  }
}

TEST_CASE("kernel identity: worked cases") {
  const TruncationSpec t{0, 60, 1e-14};
  CHECK(kernel_identity_gap(1, 0, 1, L0, 0.0, t) == 0.0);
  CHECK(kernel_identity_gap(3, 2, 4, LH, 0.0, t) == 0.0);
  CHECK(kernel_identity_gap(1, 0, 1, L0, 0.3, t) < 1e-10);
  CHECK(kernel_identity_gap(2, 1, 2, LH, -0.4, t) < 1e-10);
  CHECK_THROWS_AS(kernel_identity_gap(1, 0, 1, L0, 1.0, t), DivergenceError);
  CHECK_THROWS_AS(kernel_identity_gap(1, 3, 1, L0, 0.2, t), DomainError);
  CHECK_THROWS_AS(kernel_identity_gap(0, 0, 1, L0, 0.2, t), DomainError);
}

TEST_CASE("kernel identity over the grid, and the l/4 reading fails") {
  const TruncationSpec t{0, 60, 1e-14};
  double worst = 0.0, worst_shifted = 0.0;
  for (int l = 1; l <= 4; ++l) {
    for (int al = 0; al <= 5; ++al) {
      for (int ip = 0; ip <= al; ++ip) {
        for (auto lam : {L0, LH}) {
          for (double eta : {-0.6, -0.35, -0.1, 0.15, 0.4, 0.6}) {
            worst = std::max(worst, kernel_identity_gap(l, ip, al, lam, eta, t));
            if (l >= 2 && al > ip) {
              worst_shifted = std::max(
                  worst_shifted, detail::kernel_identity_gap_shift(l, ip, al, lam, eta, t, l / 4.0));
            }
          }
        }
      }
    }
  }
  CHECK(worst < 1e-10);
  CHECK(worst_shifted > 1e-3);
}

TEST_CASE("leading term is the 2F1") {
  const TruncationSpec t{40, 80, 1e-15};
  CHECK(leading_term_check({2, 1, 0, 8, 1}, L0, 2.0, t) == 0.0);
  CHECK(leading_term_check({2, 1, 0, 8, 1}, LH, 2.0, t) == 0.0);
  CHECK(leading_term_check({2, 1, 0, 3.3, 4}, L0, 2.4, t) < 1e-12);
  testing::ParamSampler s(33);
  for (int k = 0; k < 50; ++k) {
    const LameParams p = s.params();
    const double x = s.admissible_x(p, 0.5, true);
    CHECK(leading_term_check(p, LH, x, t) < 1e-9);
    CHECK(leading_term_check(p, L0, x, t) < 1e-9);
  }
}
