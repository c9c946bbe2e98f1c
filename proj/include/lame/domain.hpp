#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lame/params.hpp"

namespace lame {

// |z^2/((a-b)(a-c)) + (2a-b-c) z/((a-b)(a-c))| with z = x - a.
double convergence_metric(const LameParams& p, double x);

// |A z| + |B z^2| with A = -(2a-b-c)/((a-b)(a-c)), B = -1/((a-b)(a-c)), the
// asymptotic recurrence coefficients. Bounds convergence_metric from above.
double absolute_metric(const LameParams& p, double x);

// max(|z/(a-b)|, |z/(a-c)|): the true radius ratio of the Frobenius series
// about a (nearest other singular point).
double radius_ratio(const LameParams& p, double x);

// Rows of the convergence table, with h = a - (b+c)/2 and D = (a-b)(a-c).
enum class DomainCase {
  Degenerate,         // a = b or a = c
  PosDBelowH2Rev,     // 0 < h^2 < D (never attained for real a, b, c)
  PosDEqualH2,        // D = h^2 > 0
  PosDBelowH2,        // 0 < D < h^2
  NegDAboveH2,        // 0 <= h^2 < -D
  NegDEqualH2,        // -D = h^2 > 0
  NegDBelowH2,        // 0 < -D < h^2
};

std::string case_name(DomainCase c);
// The row's condition written out, e.g. "0 < (a-b)(a-c) < (a-(b+c)/2)^2".
std::string case_condition(DomainCase c);

// Open interval; lo may be -inf and hi +inf.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct DomainReport {
  DomainCase case_label = DomainCase::Degenerate;
  std::vector<Interval> intervals;        // from the roots of metric(x) = 1
  std::vector<Interval> table_intervals;  // from the row's radical formulas
  double table_discrepancy = 0.0;         // max endpoint difference between the two
  std::optional<std::pair<double, double>> metric_at;
};

DomainReport domain_classify(const LameParams& p, std::optional<double> x = std::nullopt);

// 1/(1 + z^2/D + (2a-b-c) z/D); DivergenceError if metric >= 1.
double limit_full(const LameParams& p, double x);
// 1/(1 + (2a-b-c) z/D); DivergenceError if |(2a-b-c) z/D| >= 1.
double limit_A_dominant(const LameParams& p, double x);
// 1/(1 + z^2/D); DivergenceError if |z^2/D| >= 1.
double limit_B_dominant(const LameParams& p, double x);

}  // namespace lame
