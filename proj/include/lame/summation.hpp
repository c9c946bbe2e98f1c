#pragma once

#include <cmath>

namespace lame {

// Neumaier's variant of Kahan summation.
template <typename Real>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real init) : sum_(init) {}

  void add(Real v) {
    const Real t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(Real v) {
    add(v);
    return *this;
  }

  [[nodiscard]] Real value() const { return sum_ + comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

}  // namespace lame
