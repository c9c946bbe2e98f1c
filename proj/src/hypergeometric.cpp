#include "lame/hypergeometric.hpp"

#include <cmath>
#include <limits>

#include "lame/summation.hpp"

namespace lame {
namespace {

bool nonpositive_integer(double v) { return v <= 0.0 && std::floor(v) == v; }

}  // namespace

double pochhammer(double x, int n) {
  if (n < 0) throw DomainError("pochhammer needs n >= 0");
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x + k;
  return r;
}

double beta_fn(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("beta_fn needs p > 0 and q > 0");
  return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

double gauss_2f1(const Hyp2F1Args& args, const TruncationSpec& t) {
  t.validate();
  const bool terminates = nonpositive_integer(args.a1) || nonpositive_integer(args.b1);
  if (std::abs(args.z) >= 1.0 && !terminates) {
    throw DivergenceError("2F1 series diverges for |z| >= 1");
  }
  if (nonpositive_integer(args.c1)) {
    // Fine only if a numerator parameter hits zero first.
    const bool a_first = nonpositive_integer(args.a1) && args.a1 > args.c1;
    const bool b_first = nonpositive_integer(args.b1) && args.b1 > args.c1;
    if (!a_first && !b_first) throw DomainError("2F1 lower parameter is a nonpositive integer");
  }
  CompensatedSum<double> sum(1.0);
  double term = 1.0;
  int small = 0;
  for (int n = 0; n < t.i_max; ++n) {
    term *= (args.a1 + n) * (args.b1 + n) / ((args.c1 + n) * (n + 1.0)) * args.z;
    if (term == 0.0) break;
    sum += term;
    if (std::abs(term) <= t.tol * std::abs(sum.value())) {
      if (++small >= 2) break;
    } else {
      small = 0;
    }
  }
  return sum.value();
}

namespace detail {

double kernel_identity_gap_shift(int l, int i_prev, int alpha_l, IndicialRoot lam, double eta,
                                 const TruncationSpec& t, double shift) {
  t.validate();
  if (l < 1) throw DomainError("kernel identity needs l >= 1");
  if (i_prev < 0 || alpha_l < i_prev) throw DomainError("kernel identity needs 0 <= i_prev <= alpha_l");
  if (!(std::abs(eta) < 1.0)) throw DivergenceError("kernel identity needs |eta| < 1");
  const double lv = lam.value();

  // Left: finite sum, Pochhammer ratios built one factor at a time.
  CompensatedSum<double> left;
  double w = std::pow(eta, i_prev);
  for (int i = i_prev; i <= alpha_l; ++i) {
    left += w;
    const double r = i;
    w *= eta * (r - alpha_l) * (r + alpha_l + l + 0.25 + lv) /
         ((r + l / 2.0 + 0.75 + lv / 2) * (r + l / 2.0 + 1.0 + lv / 2));
  }

  // Right: beta-weighted j-series.
  const double c1 = i_prev + l / 2.0 - 0.25 + lv / 2;
  const double c2 = i_prev + l / 2.0 + lv / 2;
  const double up = alpha_l + i_prev + l + shift + lv;
  CompensatedSum<double> right;
  double fact = 1.0;
  for (int j = 0; j <= t.i_max; ++j) {
    if (j > 0) fact *= j;
    const double num = pochhammer(i_prev - alpha_l, j) * pochhammer(up, j);
    if (num == 0.0) break;
    if (j == 0) {
      right += 1.0;  // c B(c, 1) = 1
      continue;
    }
    right += c1 * c2 * beta_fn(c1, j + 1.0) * beta_fn(c2, j + 1.0) * num / (fact * fact) *
             std::pow(eta, j);
  }
  return std::abs(left.value() - std::pow(eta, i_prev) * right.value());
}

}  // namespace detail

double kernel_identity_gap(int l, int i_prev, int alpha_l, IndicialRoot lam, double eta,
                           const TruncationSpec& t) {
  return detail::kernel_identity_gap_shift(l, i_prev, alpha_l, lam, eta, t, 0.25);
}

double leading_term_check(const LameParams& p, IndicialRoot kind, double x,
                          const TruncationSpec& t) {
  const SeriesResult r = kind.is_half() ? lame_second_kind_infinite(p, x, t)
                                        : lame_first_kind_infinite(p, x, t);
  const SeriesVariables v = series_vars(p, x);
  const double al = p.alpha;
  Hyp2F1Args h;
  if (kind.is_half()) {
    h = {-al / 4 + 0.25, al / 4 + 0.5, 1.25, v.eta};
  } else {
    h = {-al / 4, al / 4 + 0.25, 0.75, v.eta};
  }
  // Sum the 2F1 to the same inner cutoff as y_0, without early exit.
  TruncationSpec ht = t;
  ht.tol = std::numeric_limits<double>::min();
  const double lead = kind.is_half() ? std::sqrt(v.z) : 1.0;
  return std::abs(r.sub_values[0] - lead * gauss_2f1(h, ht));
}

}  // namespace lame
