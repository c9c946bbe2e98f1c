#include "lame/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lame {
namespace {

constexpr double kTieTol = 1e-12;

bool near_equal(double u, double v) {
  return std::abs(u - v) <= kTieTol * std::max(std::abs(u), std::abs(v));
}

// Real roots of z^2 + s z - k = 0, discriminant snapped to zero on a relative tie.
std::vector<double> quad_roots(double s, double k) {
  double disc = s * s + 4.0 * k;
  if (std::abs(disc) <= kTieTol * (s * s + 4.0 * std::abs(k))) disc = 0.0;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-0.5 * s};
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (s + (s >= 0.0 ? sq : -sq));
  return {qq, -k / qq};
}

double endpoint_gap(const std::vector<Interval>& u, const std::vector<Interval>& v) {
  if (u.size() != v.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  auto rel = [](double p, double q) {
    if (p == q) return 0.0;  // covers matching infinities
    return std::abs(p - q) / std::max(1.0, std::max(std::abs(p), std::abs(q)));
  };
  for (std::size_t i = 0; i < u.size(); ++i) {
    worst = std::max({worst, rel(u[i].lo, v[i].lo), rel(u[i].hi, v[i].hi)});
  }
  return worst;
}

std::vector<Interval> table_intervals(DomainCase row, double m, double h2, double D) {
  const double plus = std::sqrt(std::max(0.0, h2 + D));
  const double minus = std::sqrt(std::max(0.0, h2 - D));
  switch (row) {
    case DomainCase::Degenerate:
      return {};
    case DomainCase::PosDBelowH2Rev:
      return {{m - plus, m + plus}};
    case DomainCase::PosDEqualH2:
      return {{m - std::sqrt(2.0 * h2), m}, {m, m + std::sqrt(2.0 * h2)}};
    case DomainCase::PosDBelowH2:
      return {{m - plus, m - minus}, {m + minus, m + plus}};
    case DomainCase::NegDAboveH2:
      return {{m - minus, m + minus}};
    case DomainCase::NegDEqualH2:
      return {{m - std::sqrt(2.0 * h2), m}, {m, m + std::sqrt(2.0 * h2)}};
    case DomainCase::NegDBelowH2:
      return {{m - minus, m - plus}, {m + plus, m + minus}};
  }
  return {};
}

}  // namespace

double convergence_metric(const LameParams& p, double x) {
  p.validate();
  const double z = x - p.a;
  return std::abs((z * z + p.skew() * z) / p.denom());
}

double absolute_metric(const LameParams& p, double x) {
  p.validate();
  const double z = x - p.a;
  return (z * z + std::abs(p.skew() * z)) / std::abs(p.denom());
}

double radius_ratio(const LameParams& p, double x) {
  p.validate();
  const double z = x - p.a;
  return std::max(std::abs(z / (p.a - p.b)), std::abs(z / (p.a - p.c)));
}

std::string case_name(DomainCase c) {
  switch (c) {
    case DomainCase::Degenerate: return "no-solution";
    case DomainCase::PosDBelowH2Rev: return "0<h2<D";
    case DomainCase::PosDEqualH2: return "D=h2>0";
    case DomainCase::PosDBelowH2: return "0<D<h2";
    case DomainCase::NegDAboveH2: return "0<=h2<-D";
    case DomainCase::NegDEqualH2: return "-D=h2>0";
    case DomainCase::NegDBelowH2: return "0<-D<h2";
  }
  return "unknown";
}

std::string case_condition(DomainCase c) {
  switch (c) {
    case DomainCase::Degenerate: return "a = b or a = c (no solution)";
    case DomainCase::PosDBelowH2Rev: return "0 < (a-(b+c)/2)^2 < (a-b)(a-c)";
    case DomainCase::PosDEqualH2: return "(a-b)(a-c) = (a-(b+c)/2)^2 > 0";
    case DomainCase::PosDBelowH2: return "0 < (a-b)(a-c) < (a-(b+c)/2)^2";
    case DomainCase::NegDAboveH2: return "0 <= (a-(b+c)/2)^2 < -(a-b)(a-c)";
    case DomainCase::NegDEqualH2: return "-(a-b)(a-c) = (a-(b+c)/2)^2 > 0";
    case DomainCase::NegDBelowH2: return "0 < -(a-b)(a-c) < (a-(b+c)/2)^2";
  }
  return "unknown";
}

DomainReport domain_classify(const LameParams& p, std::optional<double> x) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c)) {
    throw InvalidParams("singular points must be finite");
  }
  DomainReport rep;
  if (p.a == p.b || p.a == p.c) {
    rep.case_label = DomainCase::Degenerate;
    return rep;
  }
  const double m = 0.5 * (p.b + p.c);
  const double h = p.a - m;
  const double h2 = h * h;
  const double D = p.denom();
  if (D > 0.0) {
    if (h2 > 0.0 && near_equal(h2, D)) {
      rep.case_label = DomainCase::PosDEqualH2;
    } else {
      rep.case_label = h2 > D ? DomainCase::PosDBelowH2 : DomainCase::PosDBelowH2Rev;
    }
  } else {
    if (h2 > 0.0 && near_equal(h2, -D)) {
      rep.case_label = DomainCase::NegDEqualH2;
    } else {
      rep.case_label = h2 < -D ? DomainCase::NegDAboveH2 : DomainCase::NegDBelowH2;
    }
  }

  // |z^2 + s z| < |D|: breakpoints are the roots of z^2 + s z = +-D.
  const double s = p.skew();
  std::vector<double> pts;
  for (double k : {D, -D}) {
    for (double r : quad_roots(s, k)) pts.push_back(p.a + r);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double mid = 0.5 * (pts[i] + pts[i + 1]);
    if (convergence_metric(p, mid) < 1.0) rep.intervals.push_back({pts[i], pts[i + 1]});
  }

  rep.table_intervals = table_intervals(rep.case_label, m, h2, D);
  rep.table_discrepancy = endpoint_gap(rep.intervals, rep.table_intervals);
  if (x) rep.metric_at = std::make_pair(*x, convergence_metric(p, *x));
  return rep;
}

double limit_full(const LameParams& p, double x) {
  if (convergence_metric(p, x) >= 1.0) throw DivergenceError("limit_full needs metric < 1");
  const double z = x - p.a;
  const double D = p.denom();
  return 1.0 / (1.0 + z * z / D + p.skew() * z / D);
}

double limit_A_dominant(const LameParams& p, double x) {
  p.validate();
  const double z = x - p.a;
  const double t = p.skew() * z / p.denom();
  if (std::abs(t) >= 1.0) throw DivergenceError("limit_A_dominant needs |(2a-b-c) z / D| < 1");
  return 1.0 / (1.0 + t);
}

double limit_B_dominant(const LameParams& p, double x) {
  p.validate();
  const double z = x - p.a;
  const double t = z * z / p.denom();
  if (std::abs(t) >= 1.0) throw DivergenceError("limit_B_dominant needs |z^2 / D| < 1");
  return 1.0 / (1.0 + t);
}

}  // namespace lame
