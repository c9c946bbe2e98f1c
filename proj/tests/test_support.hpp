#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "lame/domain.hpp"
#include "lame/recurrence.hpp"
#include "lame/series.hpp"

namespace lame::testing {

// c_{N+1} as a function of q, in long double.
inline long double overshoot(LameParams p, IndicialRoot lam, int N, long double q) {
  p.q = static_cast<double>(q);
  const auto c = detail::frobenius_coeffs_t<long double>(p, lam, N + 1);
  return c[static_cast<std::size_t>(N) + 1];
}

// Secant refinement of an eigenvalue estimate; the eigensolver alone leaves
// c_{N+1} visibly nonzero for the larger families.
inline double polish_q(const LameParams& p, IndicialRoot lam, int N, double q0) {
  if (N < 0) return q0;
  long double x0 = q0, x1 = q0 + 1e-7 * std::max(1.0, std::abs(q0));
  long double f0 = overshoot(p, lam, N, x0), f1 = overshoot(p, lam, N, x1);
  for (int it = 0; it < 50 && f1 != f0; ++it) {
    const long double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = overshoot(p, lam, N, x1);
    if (std::abs(x1 - x0) <= 1e-17L * std::abs(x1)) break;
  }
  const double q = static_cast<double>(x1);
  return std::abs(q - q0) <= 1e-6 * std::max(1.0, std::abs(q0)) ? q : q0;
}

// All real q for which the polynomial family terminates, i.e. c_{N+1}(q) = 0.
// With K = (alpha(alpha+1) a - q)/4 the recurrence for c_0..c_N with c_{N+1} = 0
// reads K c = M c for the tridiagonal
//   M[n][n] = s (n+lambda)^2, M[n][n+1] = d_n, M[n][n-1] = -B_n d_n,
// d_n = (a-b)(a-c)(n+1+lambda)(n+1/2+lambda).
inline std::vector<double> eigen_q(const SingularPoints& pts, const PolynomialSpec& spec,
                                   IndicialRoot lam) {
  const int N = polynomial_degree(spec);
  LameParams p = polynomial_params(pts, spec, 0.0, lam);
  const double lv = lam.value();
  const double D = p.denom();
  const double s = p.skew();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n) {
    const double d = D * (n + 1 + lv) * (n + 0.5 + lv);
    M(n, n) = s * (n + lv) * (n + lv);
    if (n + 1 <= N) M(n, n + 1) = d;
    if (n >= 1) M(n, n - 1) = -coeff_B(p, lam, n) * d;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  std::vector<double> qs;
  const double scale = std::max(1.0, M.norm());
  for (int i = 0; i <= N; ++i) {
    const auto ev = es.eigenvalues()[i];
    if (std::abs(ev.imag()) <= 1e-9 * scale) {
      qs.push_back(polish_q(p, lam, N, p.alpha * (p.alpha + 1) * p.a - 4.0 * ev.real()));
    }
  }
  return qs;
}

// Binomial double sum sum_{k<=depth} sum_{n+m=k} C(k,n) At^n Bt^m with
// At = -(2a-b-c) z/D, Bt = -z^2/D; converges to 1/(1 - At - Bt).
inline double binomial_double_sum(const LameParams& p, double x, int depth) {
  const double z = x - p.a;
  const double At = -p.skew() * z / p.denom();
  const double Bt = -z * z / p.denom();
  double total = 0.0;
  for (int k = 0; k <= depth; ++k) {
    double binom = 1.0;
    for (int n = 0; n <= k; ++n) {
      total += binom * std::pow(At, n) * std::pow(Bt, k - n);
      binom = binom * (k - n) / (n + 1);
    }
  }
  return total;
}

inline double rel_diff(double u, double v) {
  return std::abs(u - v) / std::max(std::abs(v), 1e-300);
}

// Random parameters with a-b, a-c bounded away from zero.
struct ParamSampler {
  std::mt19937_64 rng;
  explicit ParamSampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

  LameParams params() {
    LameParams p;
    p.a = uniform(-3, 3);
    auto away = [&] {
      const double mag = uniform(0.5, 4.0);
      return uniform(0, 1) < 0.5 ? -mag : mag;
    };
    p.b = p.a + away();
    p.c = p.a + away();
    p.q = uniform(-5, 5);
    p.alpha = uniform(-3, 6);
    return p;
  }

  // x with both the convergence metric and |Az|+|Bz^2| below `bound`; x >= a
  // when `right_only`.
  double admissible_x(const LameParams& p, double bound, bool right_only) {
    const double reach = std::min(std::abs(p.a - p.b), std::abs(p.a - p.c));
    for (;;) {
      const double z = uniform(right_only ? 0.0 : -reach, reach);
      const double x = p.a + z;
      if (convergence_metric(p, x) < bound && absolute_metric(p, x) < bound) return x;
    }
  }
};

}  // namespace lame::testing
