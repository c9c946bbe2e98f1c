#pragma once

#include "lame/params.hpp"
#include "lame/series.hpp"

namespace lame {

// Arguments of 2F1(a1, b1; c1; z).
struct Hyp2F1Args {
  double a1 = 0.0;
  double b1 = 0.0;
  double c1 = 1.0;
  double z = 0.0;
};

// Rising factorial (x)_n.
double pochhammer(double x, int n);

// Gamma(p) Gamma(q) / Gamma(p+q) for p, q > 0; DomainError otherwise.
double beta_fn(double p, double q);

// Series sum_{n} (a1)_n (b1)_n / ((c1)_n n!) z^n, at most t.i_max + 1 terms,
// stopping early once two consecutive terms fall below t.tol relative to the sum
// or the series terminates. DivergenceError for |z| >= 1 unless it terminates.
double gauss_2f1(const Hyp2F1Args& args, const TruncationSpec& t);

// |left - right| for the level-l inner summation of the polynomial sub-series:
//   left  = sum_{i=i_prev}^{alpha_l} eta^i prod_{r=i_prev}^{i-1}
//             (r-alpha_l)(r+alpha_l+l+1/4+lambda) / ((r+l/2+3/4+lambda/2)(r+l/2+1+lambda/2))
//   right = eta^i_prev sum_j c1 c2 B(c1, j+1) B(c2, j+1)
//             (i_prev-alpha_l)_j (alpha_l+i_prev+l+1/4+lambda)_j / (j!)^2 eta^j
// with c1 = i_prev + l/2 - 1/4 + lambda/2, c2 = i_prev + l/2 + lambda/2.
double kernel_identity_gap(int l, int i_prev, int alpha_l, IndicialRoot lam, double eta,
                           const TruncationSpec& t);

// |y_0 - (x-a)^lambda 2F1(...)| where y_0 is the zero-A sub-series of the
// infinite evaluator and the 2F1 is (-alpha/4, alpha/4+1/4; 3/4; eta) for
// lambda = 0 or (-alpha/4+1/4, alpha/4+1/2; 5/4; eta) for lambda = 1/2.
double leading_term_check(const LameParams& p, IndicialRoot kind, double x,
                          const TruncationSpec& t);

namespace detail {
// kernel_identity_gap with the constant 1/4 in the right-hand upper parameter
// replaced by `shift`; used to show which reading of that constant holds.
double kernel_identity_gap_shift(int l, int i_prev, int alpha_l, IndicialRoot lam, double eta,
                                 const TruncationSpec& t, double shift);
}  // namespace detail

}  // namespace lame
