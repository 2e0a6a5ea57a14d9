#pragma once

#include <cmath>
#include <limits>
#include <utility>

namespace ssent {

// Absolute tolerance for majorization / Ky-Fan comparisons on single
// spectra.
inline constexpr double kCompareTol = 1e-12;

// Relative snapping tolerance for boundary decisions (thresholds, floors).
// Values that agree to this relative precision are treated as equal and the
// decision is resolved toward the answer that accepts the protocol.
inline constexpr double kBoundaryRelTol = 1e-12;

// Entries at or below this are treated as zero when counting Schmidt rank.
inline constexpr double kZeroThreshold = 1e-15;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Neumaier variant of Kahan summation.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

}  // namespace ssent
