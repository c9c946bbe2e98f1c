#include "lame/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lame/domain.hpp"
#include "lame/recurrence.hpp"
#include "lame/summation.hpp"

namespace lame {
namespace {

// A path through the recurrence is a word in A-steps and B-steps. At level k
// (k A-steps taken) with i B-steps taken the power index is n = 2i + k; an A-step
// from there carries A_n w, a B-step carries B_{n+1} w^2. The policies below
// return exactly those two weights as step(k, i) and jump(k, i).

template <typename Real>
struct GenericPolicy {
  const CoefficientFn* A;
  const CoefficientFn* B;
  Real w;
  Real step(int k, int i) const { return Real((*B)(2 * i + k + 1)) * w * w; }
  Real jump(int k, int i) const { return Real((*A)(2 * i + k)) * w; }
};

// Same weights written in mu, eta and Pochhammer-style factors.
template <typename Real>
struct ClosedPolicy {
  Real mu, eta, s, alpha4, cst, half_lam;
  // cst = q/16 - a alpha(alpha+1)/16
  Real step(int k, int l) const {
    const Real h = Real(l) + Real(k) / 2 + half_lam;
    return eta * (h - alpha4) * (h + alpha4 + Real(0.25)) / ((h + 1) * (h + Real(0.75)));
  }
  Real jump(int k, int i) const {
    const Real h = Real(i) + Real(k) / 2 + half_lam;
    return mu * (s * h * h + cst) / ((h + Real(0.5)) * (h + Real(0.25)));
  }
};

template <typename Real>
ClosedPolicy<Real> closed_policy(const LameParams& p, IndicialRoot lam, Real mu, Real eta) {
  const Real al = p.alpha;
  ClosedPolicy<Real> pol{};
  pol.mu = mu;
  pol.eta = eta;
  pol.s = Real(p.skew());
  pol.alpha4 = al / 4;
  pol.cst = (Real(p.q) - Real(p.a) * al * (al + 1)) / 16;
  pol.half_lam = Real(lam.value()) / 2;
  return pol;
}

template <typename Real>
struct KernelOut {
  std::vector<Real> sub;         // sum_i G_m[i], leaf factor not applied
  std::vector<Real> by_power;    // optional regrouping by n = 2i + k
  Real last_inner = 0;           // sum over levels of |G_k[bound]|
  Real leak = 0;                 // weight of index leak_index + 1
};

struct KernelOpts {
  int n_max = 0;
  std::vector<int> bounds;  // inner bound per level 0..n_max
  bool adaptive = false;
  double tol = 0.0;
  int leak_index = -1;      // N: collect paths landing on N+1
  bool regroup = false;
};

// Forward pass over levels. G_k[i] is the total weight of all paths that sit at
// level k with i B-steps; G_{k+1}[i] = sum_{i' <= i} G_k[i'] jump(k,i')
// prod_{l=i'}^{i-1} step(k+1,l), accumulated ascending in i' with the product
// built incrementally.
template <typename Real, typename Policy>
KernelOut<Real> run_kernel(const Policy& pol, const KernelOpts& o) {
  KernelOut<Real> out;
  const int N = o.leak_index;
  std::vector<CompensatedSum<Real>> power;
  if (o.regroup) {
    int top = 0;
    for (int k = 0; k <= o.n_max; ++k) top = std::max(top, 2 * o.bounds[k] + k);
    power.resize(static_cast<std::size_t>(top) + 1);
  }
  CompensatedSum<Real> leak;

  std::vector<Real> G(static_cast<std::size_t>(o.bounds[0]) + 1);
  G[0] = 1;
  for (int i = 1; i <= o.bounds[0]; ++i) G[i] = G[i - 1] * pol.step(0, i - 1);

  CompensatedSum<Real> total;
  int small_run = 0;
  for (int k = 0;; ++k) {
    const int U = o.bounds[k];
    CompensatedSum<Real> y;
    for (int i = 0; i <= U; ++i) {
      y += G[i];
      if (o.regroup) power[2 * i + k] += G[i];
    }
    out.sub.push_back(y.value());
    out.last_inner += std::abs(G[U]);
    total += y.value();

    if (N >= 0) {
      if ((N - k) >= 0 && (N - k) % 2 == 0 && (N - k) / 2 <= U) {
        const int i = (N - k) / 2;
        leak += G[i] * pol.jump(k, i);
      }
      if ((N - 1 - k) >= 0 && (N - 1 - k) % 2 == 0 && (N - 1 - k) / 2 <= U) {
        const int i = (N - 1 - k) / 2;
        leak += G[i] * pol.step(k, i);
      }
    }

    if (o.adaptive && k > 0) {
      if (std::abs(y.value()) <= Real(o.tol) * std::abs(total.value())) {
        if (++small_run >= 2) break;
      } else {
        small_run = 0;
      }
    }
    if (k == o.n_max) break;

    const int V = o.bounds[k + 1];
    std::vector<CompensatedSum<Real>> H(static_cast<std::size_t>(V) + 1);
    for (int ip = 0; ip <= std::min(U, V); ++ip) {
      Real w = G[ip] * pol.jump(k, ip);
      if (w == 0) continue;
      for (int i = ip; i <= V; ++i) {
        H[i] += w;
        if (i < V) {
          w *= pol.step(k + 1, i);
          if (w == 0) break;
        }
      }
    }
    G.assign(static_cast<std::size_t>(V) + 1, Real(0));
    for (int i = 0; i <= V; ++i) G[i] = H[i].value();
  }
  out.leak = leak.value();
  if (o.regroup) {
    out.by_power.reserve(power.size());
    for (const auto& s : power) out.by_power.push_back(s.value());
  }
  return out;
}

void check_caps(int n_max, int i_max) {
  if (n_max > kMaxIndex || i_max > kMaxIndex ||
      2 * static_cast<long long>(i_max) + n_max + 2 > kMaxIndex) {
    throw TruncationOverflow("summation index exceeds cap of " + std::to_string(kMaxIndex));
  }
}

template <typename Real>
Real leaf_factor(IndicialRoot lam, Real w) {
  if (!lam.is_half()) return 1;
  if (w < 0) throw BranchError("(x-a)^(1/2) needs x >= a");
  return std::sqrt(w);
}

// Ratio-based outer tail |y_M| rho/(1-rho) plus the size of the last inner term
// kept on every level.
template <typename Real>
double infinite_tail(const KernelOut<Real>& k, Real leaf) {
  const auto& s = k.sub;
  const std::size_t M = s.size() - 1;
  double outer = 0.0;
  if (M >= 1 && s[M - 1] != 0) {
    const double rho = static_cast<double>(std::abs(s[M] / s[M - 1]));
    outer = rho < 1 ? static_cast<double>(std::abs(s[M] * leaf)) * rho / (1 - rho)
                    : std::numeric_limits<double>::infinity();
  }
  return outer + static_cast<double>(std::abs(k.last_inner * leaf));
}

template <typename Real>
SeriesResult finish(const KernelOut<Real>& k, Real leaf, double tail) {
  SeriesResult r;
  CompensatedSum<Real> v;
  r.sub_values.reserve(k.sub.size());
  for (Real y : k.sub) {
    r.sub_values.push_back(static_cast<double>(y * leaf));
    v += y * leaf;
  }
  r.value = static_cast<double>(v.value());
  r.terms_used = static_cast<int>(k.sub.size());
  r.tail_estimate = tail;
  return r;
}

KernelOpts infinite_opts(const TruncationSpec& t) {
  KernelOpts o;
  o.n_max = t.n_max;
  o.bounds.assign(static_cast<std::size_t>(t.n_max) + 1, t.i_max);
  o.adaptive = true;
  o.tol = t.tol;
  return o;
}

KernelOpts polynomial_opts(int N) {
  KernelOpts o;
  o.n_max = N;
  o.bounds.resize(static_cast<std::size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) o.bounds[k] = (N - k) / 2;
  o.leak_index = N;
  return o;
}

template <typename Real>
SeriesResult lame_infinite_t(const LameParams& p, IndicialRoot lam, double x,
                             const TruncationSpec& t) {
  p.validate();
  t.validate();
  check_caps(t.n_max, t.i_max);
  const Real z = Real(x) - Real(p.a);
  const Real D = Real(p.a - p.b) * Real(p.a - p.c);
  const Real leaf = leaf_factor(lam, z);
  const auto pol = closed_policy<Real>(p, lam, -z / D, -z * z / D);
  const auto k = run_kernel<Real>(pol, infinite_opts(t));
  double tail = infinite_tail(k, leaf);
  // Outside the disc of convergence no tail estimate is meaningful.
  if (std::max(convergence_metric(p, x), radius_ratio(p, x)) >= 1.0) {
    tail = std::numeric_limits<double>::infinity();
  }
  return finish(k, leaf, tail);
}

template <typename Real>
SeriesResult lame_polynomial_t(const SingularPoints& pts, const PolynomialSpec& spec, double q,
                               double x, IndicialRoot lam, const TruncationSpec& t) {
  spec.validate();
  t.validate();
  const LameParams p = polynomial_params(pts, spec, q, lam);
  p.validate();
  const int N = polynomial_degree(spec);
  check_caps(N, N);
  const Real z = Real(x) - Real(p.a);
  const Real D = Real(p.a - p.b) * Real(p.a - p.c);
  const Real leaf = leaf_factor(lam, z);
  const auto pol = closed_policy<Real>(p, lam, -z / D, -z * z / D);
  const auto k = run_kernel<Real>(pol, polynomial_opts(N));
  return finish(k, leaf, static_cast<double>(std::abs(k.leak * leaf)));
}

}  // namespace

void TruncationSpec::validate() const {
  if (n_max < 0 || i_max < 0) throw InvalidParams("truncation cutoffs must be >= 0");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidParams("truncation tol must be > 0");
}

void PolynomialSpec::validate() const {
  if (j < 0) throw SpecViolation("polynomial index j must be >= 0");
  if (alpha_seq.size() < static_cast<std::size_t>(j) + 1) {
    throw SpecViolation("alpha_seq needs entries alpha_0 .. alpha_j");
  }
  for (std::size_t i = 0; i < alpha_seq.size(); ++i) {
    if (alpha_seq[i] < 0) throw SpecViolation("alpha_seq entries must be >= 0");
    if (i > 0 && alpha_seq[i] < alpha_seq[i - 1]) {
      throw SpecViolation("alpha_seq must be nondecreasing");
    }
  }
  if (2LL * alpha_seq[j] + j > kMaxIndex) throw TruncationOverflow("polynomial degree exceeds cap");
}

SeriesVariables series_vars(const LameParams& p, double x) {
  p.validate();
  const double z = x - p.a;
  const double D = p.denom();
  return {z, -z / D, -z * z / D};
}

SeriesResult generic_3trf_infinite(const CoefficientFn& A, const CoefficientFn& B,
                                   IndicialRoot lam, double w, const TruncationSpec& t) {
  t.validate();
  check_caps(t.n_max, t.i_max);
  const double leaf = leaf_factor(lam, w);
  const GenericPolicy<double> pol{&A, &B, w};
  const auto k = run_kernel<double>(pol, infinite_opts(t));
  return finish(k, leaf, infinite_tail(k, leaf));
}

SeriesResult generic_3trf_polynomial(const CoefficientFn& A, const CoefficientFn& B,
                                     IndicialRoot lam, const std::vector<int>& betas, double w,
                                     const TruncationSpec& t) {
  t.validate();
  if (betas.empty()) throw TerminationViolation("betas must not be empty");
  int N = 0;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    if (betas[k] < 0) throw TerminationViolation("betas must be >= 0");
    N = std::max(N, 2 * betas[k] + static_cast<int>(k));
  }
  check_caps(N, N);
  if (betas.size() != static_cast<std::size_t>(N) + 1) {
    throw TerminationViolation("betas must cover levels 0.." + std::to_string(N));
  }
  for (std::size_t k = 0; k < betas.size(); ++k) {
    const int top = 2 * betas[k] + static_cast<int>(k);
    if (top != N && top != N - 1) {
      throw TerminationViolation("level " + std::to_string(k) + " stops below degree " +
                                 std::to_string(N));
    }
  }
  if (B(N + 1) != 0.0) {
    throw TerminationViolation("B(" + std::to_string(N + 1) + ") does not vanish");
  }
  const double leaf = leaf_factor(lam, w);
  const GenericPolicy<double> pol{&A, &B, w};
  auto o = polynomial_opts(N);
  const auto k = run_kernel<double>(pol, o);
  return finish(k, leaf, std::abs(k.leak * leaf));
}

SeriesResult lame_first_kind_infinite(const LameParams& p, double x, const TruncationSpec& t,
                                      Precision prec) {
  if (prec == Precision::Extended) {
    return lame_infinite_t<long double>(p, IndicialRoot::first_kind(), x, t);
  }
  return lame_infinite_t<double>(p, IndicialRoot::first_kind(), x, t);
}

SeriesResult lame_second_kind_infinite(const LameParams& p, double x, const TruncationSpec& t,
                                       Precision prec) {
  if (prec == Precision::Extended) {
    return lame_infinite_t<long double>(p, IndicialRoot::second_kind(), x, t);
  }
  return lame_infinite_t<double>(p, IndicialRoot::second_kind(), x, t);
}

double polynomial_alpha(const PolynomialSpec& spec, IndicialRoot lam) {
  spec.validate();
  const double base = 2.0 * (2.0 * spec.alpha_seq[spec.j] + spec.j + lam.value());
  return spec.sign == Sign::Plus ? base : -base - 1.0;
}

int polynomial_degree(const PolynomialSpec& spec) {
  spec.validate();
  return 2 * spec.alpha_seq[spec.j] + spec.j;
}

LameParams polynomial_params(const SingularPoints& pts, const PolynomialSpec& spec, double q,
                             IndicialRoot lam) {
  return {pts.a, pts.b, pts.c, q, polynomial_alpha(spec, lam)};
}

SeriesResult lame_first_kind_polynomial(const SingularPoints& pts, const PolynomialSpec& spec,
                                        double q, double x, const TruncationSpec& t,
                                        Precision prec) {
  if (prec == Precision::Extended) {
    return lame_polynomial_t<long double>(pts, spec, q, x, IndicialRoot::first_kind(), t);
  }
  return lame_polynomial_t<double>(pts, spec, q, x, IndicialRoot::first_kind(), t);
}

SeriesResult lame_second_kind_polynomial(const SingularPoints& pts, const PolynomialSpec& spec,
                                         double q, double x, const TruncationSpec& t,
                                         Precision prec) {
  if (prec == Precision::Extended) {
    return lame_polynomial_t<long double>(pts, spec, q, x, IndicialRoot::second_kind(), t);
  }
  return lame_polynomial_t<double>(pts, spec, q, x, IndicialRoot::second_kind(), t);
}

template <typename Real>
std::vector<Real> polynomial_power_coeffs(const SingularPoints& pts, const PolynomialSpec& spec,
                                          double q, IndicialRoot lam) {
  const LameParams p = polynomial_params(pts, spec, q, lam);
  p.validate();
  const int N = polynomial_degree(spec);
  // With z = 1 the path weights are the bare coefficient products.
  const Real inv = Real(-1) / Real(p.denom());
  const auto pol = closed_policy<Real>(p, lam, inv, inv);
  auto o = polynomial_opts(N);
  o.leak_index = -1;
  o.regroup = true;
  return run_kernel<Real>(pol, o).by_power;
}

template std::vector<double> polynomial_power_coeffs<double>(const SingularPoints&,
                                                              const PolynomialSpec&, double,
                                                              IndicialRoot);
template std::vector<long double> polynomial_power_coeffs<long double>(const SingularPoints&,
                                                                        const PolynomialSpec&,
                                                                        double, IndicialRoot);

}  // namespace lame
