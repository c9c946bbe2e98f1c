#include "lame/recurrence.hpp"

#include <cmath>
#include <string>

#include "lame/summation.hpp"

namespace lame {
namespace {

void check_depth(int N) {
  if (N < 1) throw InvalidParams("series depth N must be >= 1");
  if (N > kMaxIndex) throw TruncationOverflow("series depth " + std::to_string(N) + " exceeds cap");
}

void check_branch(const LameParams& p, IndicialRoot lam, double x) {
  if (lam.is_half() && x < p.a) {
    throw BranchError("second-kind solution needs x >= a (real branch of (x-a)^(1/2))");
  }
}

template <typename Real>
Real eval_t(const LameParams& p, IndicialRoot lam, double x, int N) {
  const auto c = detail::frobenius_coeffs_t<Real>(p, lam, N);
  const Real z = Real(x) - Real(p.a);
  if (z == 0) return lam.is_half() ? Real(0) : c[0];
  CompensatedSum<Real> acc;
  Real zn = 1;
  for (int n = 0; n <= N; ++n) {
    acc += c[n] * zn;
    zn *= z;
  }
  const Real lead = lam.is_half() ? std::sqrt(z) : Real(1);
  return lead * acc.value();
}

template <typename Real>
Real residual_t(const LameParams& p, IndicialRoot lam, std::span<const Real> c, double x) {
  if (x == p.a || x == p.b || x == p.c) {
    throw SingularPointError("ODE residual requested at a singular point");
  }
  check_branch(p, lam, x);
  const Real z = Real(x) - Real(p.a);
  const Real lv = Real(lam.value());
  CompensatedSum<Real> y, dy, d2y;
  Real zp = lam.is_half() ? std::sqrt(z) : Real(1);  // z^(n+lambda)
  for (std::size_t n = 0; n < c.size(); ++n) {
    const Real e = Real(n) + lv;
    y += c[n] * zp;
    dy += e * c[n] * zp / z;
    d2y += e * (e - 1) * c[n] * zp / (z * z);
    zp *= z;
  }
  const Real xa = z;
  const Real xb = Real(x) - Real(p.b);
  const Real xc = Real(x) - Real(p.c);
  const Real al = p.alpha;
  const Real drift = Real(0.5) * (1 / xa + 1 / xb + 1 / xc);
  const Real potential = (-al * (al + 1) * Real(x) + Real(p.q)) / (4 * xa * xb * xc);
  return d2y.value() + drift * dy.value() + potential * y.value();
}

}  // namespace

namespace detail {

template <typename Real>
std::vector<Real> frobenius_coeffs_t(const LameParams& p, IndicialRoot lam, int N) {
  p.validate();
  check_depth(N);
  std::vector<Real> c(static_cast<std::size_t>(N) + 1);
  c[0] = 1;
  c[1] = coeff_A_t<Real>(p, lam, 0) * c[0];
  for (int n = 1; n < N; ++n) {
    c[n + 1] = coeff_A_t<Real>(p, lam, n) * c[n] + coeff_B_t<Real>(p, lam, n) * c[n - 1];
  }
  return c;
}

template std::vector<double> frobenius_coeffs_t<double>(const LameParams&, IndicialRoot, int);
template std::vector<long double> frobenius_coeffs_t<long double>(const LameParams&, IndicialRoot,
                                                                  int);

}  // namespace detail

double coeff_A(const LameParams& p, IndicialRoot lam, int n) {
  p.validate();
  if (n < 0) throw InvalidParams("coeff_A needs n >= 0");
  if (n > kMaxIndex) throw TruncationOverflow("coefficient index exceeds cap");
  return detail::coeff_A_t<double>(p, lam, n);
}

double coeff_B(const LameParams& p, IndicialRoot lam, int n) {
  p.validate();
  if (n < 1) throw InvalidParams("coeff_B needs n >= 1");
  if (n > kMaxIndex) throw TruncationOverflow("coefficient index exceeds cap");
  return detail::coeff_B_t<double>(p, lam, n);
}

CoefficientSeq frobenius_coeffs(const LameParams& p, IndicialRoot lam, int N, Precision prec) {
  CoefficientSeq out;
  out.lambda = lam;
  if (prec == Precision::Extended) {
    const auto c = detail::frobenius_coeffs_t<long double>(p, lam, N);
    out.c.assign(c.begin(), c.end());
  } else {
    out.c = detail::frobenius_coeffs_t<double>(p, lam, N);
  }
  return out;
}

double eval_frobenius(const LameParams& p, IndicialRoot lam, double x, int N, Precision prec) {
  p.validate();
  check_branch(p, lam, x);
  if (prec == Precision::Extended) return static_cast<double>(eval_t<long double>(p, lam, x, N));
  return eval_t<double>(p, lam, x, N);
}

double ode_residual(const LameParams& p, IndicialRoot lam, double x, int N, Precision prec) {
  p.validate();
  if (prec == Precision::Extended) {
    const auto c = detail::frobenius_coeffs_t<long double>(p, lam, N);
    return static_cast<double>(residual_t<long double>(p, lam, c, x));
  }
  const auto c = detail::frobenius_coeffs_t<double>(p, lam, N);
  return residual_t<double>(p, lam, c, x);
}

double residual_from_coefficients(const LameParams& p, IndicialRoot lam,
                                  std::span<const long double> c, double x) {
  p.validate();
  return static_cast<double>(residual_t<long double>(p, lam, c, x));
}

double residual_from_coefficients(const LameParams& p, IndicialRoot lam,
                                  std::span<const double> c, double x) {
  p.validate();
  return residual_t<double>(p, lam, c, x);
}

}  // namespace lame
