#pragma once

#include <span>
#include <vector>

#include "lame/params.hpp"

namespace lame {

/// Frobenius coefficients c_0..c_N of y = sum c_n (x-a)^(n+lambda), with c_0 = 1.
struct CoefficientSeq {
  std::vector<double> c;
  IndicialRoot lambda = IndicialRoot::first_kind();
};

/// A_n of the three-term recurrence c_{n+1} = A_n c_n + B_n c_{n-1}.
double coeff_A(const LameParams& p, IndicialRoot lam, int n);

/// B_n of the three-term recurrence; n >= 1.
double coeff_B(const LameParams& p, IndicialRoot lam, int n);

/// c_0 = 1, c_1 = A_0, c_{n+1} = A_n c_n + B_n c_{n-1} for 1 <= n < N.
CoefficientSeq frobenius_coeffs(const LameParams& p, IndicialRoot lam, int N,
                                Precision prec = Precision::Double);

/// Truncated Frobenius series sum_{n<=N} c_n (x-a)^(n+lambda). This is the
/// reference every three-term-recurrence evaluation is checked against.
double eval_frobenius(const LameParams& p, IndicialRoot lam, double x, int N,
                      Precision prec = Precision::Double);

/// Residual of the Lamé ODE for the truncated Frobenius series, with y' and y''
/// obtained by differentiating the series term by term.
double ode_residual(const LameParams& p, IndicialRoot lam, double x, int N,
                    Precision prec = Precision::Double);

/// Same residual for an arbitrary coefficient sequence c_n of (x-a)^(n+lambda).
double residual_from_coefficients(const LameParams& p, IndicialRoot lam,
                                  std::span<const double> c, double x);
double residual_from_coefficients(const LameParams& p, IndicialRoot lam,
                                  std::span<const long double> c, double x);

namespace detail {

template <typename Real>
Real coeff_A_t(const LameParams& p, IndicialRoot lam, int n) {
  const Real al = p.alpha;
  const Real nl = Real(n) + Real(lam.value());
  const Real num = Real(0.25) * (al * (al + 1) * Real(p.a) - Real(p.q)) - Real(p.skew()) * nl * nl;
  const Real den = Real(p.a - p.b) * Real(p.a - p.c) * (nl + 1) * (nl + Real(0.5));
  return num / den;
}

template <typename Real>
Real coeff_B_t(const LameParams& p, IndicialRoot lam, int n) {
  const Real al = p.alpha;
  const Real nl = Real(n) + Real(lam.value());
  const Real num = (al - (1 - 2 * nl)) * (al - 2 * (nl - 1));
  const Real den = 4 * Real(p.a - p.b) * Real(p.a - p.c) * (nl + 1) * (nl + Real(0.5));
  return num / den;
}

template <typename Real>
std::vector<Real> frobenius_coeffs_t(const LameParams& p, IndicialRoot lam, int N);

}  // namespace detail
}  // namespace lame
