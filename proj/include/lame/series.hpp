#pragma once

#include <functional>
#include <vector>

#include "lame/params.hpp"

namespace lame {

// Cutoffs for the nested sums. n_max bounds the number of sub-series y_m,
// i_max bounds every inner summation index (infinite mode only).
struct TruncationSpec {
  int n_max = 40;
  int i_max = 60;
  double tol = 1e-15;

  void validate() const;
};

// z = x - a, mu = -z/((a-b)(a-c)), eta = -z^2/((a-b)(a-c)).
struct SeriesVariables {
  double z = 0.0;
  double mu = 0.0;
  double eta = 0.0;
};

enum class Sign { Plus, Minus };

// Selects a polynomial (B-terminated) family. Only alpha_seq[j] enters the
// value; the earlier entries must be nondecreasing up to it.
struct PolynomialSpec {
  int j = 0;
  std::vector<int> alpha_seq{0};
  Sign sign = Sign::Plus;

  void validate() const;
};

// The three singular points, for the polynomial evaluators where alpha is
// implied by the PolynomialSpec and q is passed separately.
struct SingularPoints {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct SeriesResult {
  double value = 0.0;
  std::vector<double> sub_values;  // y_0 .. y_M, y_m collects the terms with m A-factors
  int terms_used = 0;              // number of sub-series summed (M + 1)
  double tail_estimate = 0.0;
};

// Coefficient callables for the generic engines: A(n) for n >= 0, B(n) for n >= 1.
using CoefficientFn = std::function<double(int)>;

SeriesVariables series_vars(const LameParams& p, double x);

// Generic three-term-recurrence sum for y = sum c_n w^(n+lambda), where w is the
// expansion variable (for the Lame equation, w = x - a). Every inner index runs
// to t.i_max, the outer sub-series index to t.n_max, with early exit once two
// consecutive |y_m| fall below t.tol * |sum|.
SeriesResult generic_3trf_infinite(const CoefficientFn& A, const CoefficientFn& B,
                                   IndicialRoot lam, double w, const TruncationSpec& t);

// Terminating version: level k sums its B-index up to betas[k]. The degree
// N = max(2 betas[k] + k) must be reached by every level up to parity
// (2 betas[k] + k in {N-1, N}), betas must cover levels 0..N, and B(N+1) must
// vanish; otherwise TerminationViolation. tail_estimate is the size of the
// w^(N+1) term the recurrence would produce, which is zero exactly when the
// polynomial solves the recurrence.
SeriesResult generic_3trf_polynomial(const CoefficientFn& A, const CoefficientFn& B,
                                     IndicialRoot lam, const std::vector<int>& betas, double w,
                                     const TruncationSpec& t);

// Closed-form Pochhammer series about x = a, first kind (lambda = 0).
SeriesResult lame_first_kind_infinite(const LameParams& p, double x, const TruncationSpec& t,
                                      Precision prec = Precision::Double);

// Second kind (lambda = 1/2); needs x >= a.
SeriesResult lame_second_kind_infinite(const LameParams& p, double x, const TruncationSpec& t,
                                       Precision prec = Precision::Double);

// alpha = 2(2 alpha_j + j + lambda) for Sign::Plus, -2(2 alpha_j + j + lambda) - 1 for Sign::Minus.
double polynomial_alpha(const PolynomialSpec& spec, IndicialRoot lam);

// Polynomial degree N = 2 alpha_j + j in powers of (x-a) beyond (x-a)^lambda.
int polynomial_degree(const PolynomialSpec& spec);

// Full parameter set implied by a polynomial family.
LameParams polynomial_params(const SingularPoints& pts, const PolynomialSpec& spec, double q,
                             IndicialRoot lam);

SeriesResult lame_first_kind_polynomial(const SingularPoints& pts, const PolynomialSpec& spec,
                                        double q, double x, const TruncationSpec& t = {},
                                        Precision prec = Precision::Double);

SeriesResult lame_second_kind_polynomial(const SingularPoints& pts, const PolynomialSpec& spec,
                                         double q, double x, const TruncationSpec& t = {},
                                         Precision prec = Precision::Double);

// Coefficients d_0..d_N of the polynomial y = sum d_n (x-a)^(n+lambda), regrouped
// from the closed-form sub-series. Feeds residual_from_coefficients.
template <typename Real = double>
std::vector<Real> polynomial_power_coeffs(const SingularPoints& pts, const PolynomialSpec& spec,
                                          double q, IndicialRoot lam);

extern template std::vector<double> polynomial_power_coeffs<double>(const SingularPoints&,
                                                                     const PolynomialSpec&,
                                                                     double, IndicialRoot);
extern template std::vector<long double> polynomial_power_coeffs<long double>(
    const SingularPoints&, const PolynomialSpec&, double, IndicialRoot);

}  // namespace lame
