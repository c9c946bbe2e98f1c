#pragma once

#include <cmath>
#include <string>

#include "lame/errors.hpp"

namespace lame {

/// Upper bound on any summation index or series depth.
inline constexpr int kMaxIndex = 1'000'000;

/// Parameters of the algebraic Lamé equation
///   y'' + 1/2 (1/(x-a) + 1/(x-b) + 1/(x-c)) y' + (-alpha(alpha+1) x + q) / (4 (x-a)(x-b)(x-c)) y = 0.
struct LameParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double q = 0.0;
  double alpha = 0.0;

  /// (a-b)(a-c), the denominator shared by every recurrence coefficient.
  [[nodiscard]] double denom() const noexcept { return (a - b) * (a - c); }
  /// 2a - b - c.
  [[nodiscard]] double skew() const noexcept { return 2.0 * a - b - c; }

  /// Throws InvalidParams unless all fields are finite and a differs from b and c.
  void validate() const;
};

/// Exponent of the leading power z^lambda: 0 (first kind) or 1/2 (second kind).
class IndicialRoot {
 public:
  static constexpr IndicialRoot first_kind() noexcept { return IndicialRoot(false); }
  static constexpr IndicialRoot second_kind() noexcept { return IndicialRoot(true); }

  /// Accepts exactly 0 or 0.5.
  static IndicialRoot from_value(double lambda);

  [[nodiscard]] constexpr double value() const noexcept { return half_ ? 0.5 : 0.0; }
  [[nodiscard]] constexpr bool is_half() const noexcept { return half_; }
  [[nodiscard]] std::string name() const { return half_ ? "half" : "0"; }

  friend constexpr bool operator==(IndicialRoot, IndicialRoot) = default;

 private:
  constexpr explicit IndicialRoot(bool half) noexcept : half_(half) {}
  bool half_;
};

enum class Precision { Double, Extended };

inline void LameParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(q) ||
      !std::isfinite(alpha)) {
    throw InvalidParams("Lame parameters must be finite");
  }
  if (a == b || a == c) {
    throw InvalidParams("Lame parameters require a != b and a != c");
  }
}

inline IndicialRoot IndicialRoot::from_value(double lambda) {
  if (lambda == 0.0) return first_kind();
  if (lambda == 0.5) return second_kind();
  throw InvalidParams("indicial root must be 0 or 1/2");
}

}  // namespace lame
