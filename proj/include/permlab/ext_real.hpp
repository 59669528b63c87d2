#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace permlab {

/// Nonnegative extended real: a value in [0, inf]. Division by zero yields
/// infinity, 0^0 = 1 and 1^inf = 1; min(finite, inf) is the finite value.
/// These conventions are domain rules, so no raw IEEE infinity or NaN is
/// accepted from outside.
class ExtReal {
 public:
  ExtReal() : v_(0.0) {}

  /// Requires a finite value >= 0; use ExtReal::inf() for infinity.
  explicit ExtReal(double v) : v_(v) {
    if (std::isnan(v) || v < 0.0) {
      throw std::invalid_argument("ExtReal requires a nonnegative value");
    }
  }

  static ExtReal inf() {
    ExtReal x;
    x.v_ = std::numeric_limits<double>::infinity();
    return x;
  }

  bool is_inf() const { return std::isinf(v_); }
  bool is_finite() const { return !std::isinf(v_); }

  /// Underlying double; +inf when infinite.
  double value() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return raw(a.v_ + b.v_); }
  friend ExtReal operator*(ExtReal a, ExtReal b) {
    // 0 * inf does not arise from the formulas here; resolve it to 0 so
    // vanishing statistics annihilate infinite factors.
    if (a.v_ == 0.0 || b.v_ == 0.0) return raw(0.0);
    return raw(a.v_ * b.v_);
  }
  friend ExtReal operator/(ExtReal a, ExtReal b) {
    if (b.v_ == 0.0) return inf();  // 1/0 = inf
    if (b.is_inf()) return raw(a.is_inf() ? 1.0 : 0.0);
    return raw(a.v_ / b.v_);
  }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

  friend ExtReal min(ExtReal a, ExtReal b) { return raw(std::fmin(a.v_, b.v_)); }
  friend ExtReal max(ExtReal a, ExtReal b) { return raw(std::fmax(a.v_, b.v_)); }

 private:
  static ExtReal raw(double v) {
    ExtReal x;
    x.v_ = v;
    return x;
  }
  double v_;
};

/// base^e under the conventions above: e = 0 gives 1 (covers 0^0),
/// base = 1 gives 1 (covers 1^inf).
inline ExtReal ext_pow(ExtReal base, double e) {
  if (e == 0.0) return ExtReal(1.0);
  if (base.value() == 1.0) return ExtReal(1.0);
  if (base.is_inf()) return e > 0.0 ? ExtReal::inf() : ExtReal(0.0);
  if (base.value() == 0.0) return e > 0.0 ? ExtReal(0.0) : ExtReal::inf();
  double r = std::pow(base.value(), e);
  return std::isinf(r) ? ExtReal::inf() : ExtReal(r);
}

inline ExtReal ext_pow(ExtReal base, ExtReal e) {
  if (e.value() == 0.0) return ExtReal(1.0);
  if (base.value() == 1.0) return ExtReal(1.0);  // 1^inf = 1
  if (e.is_inf()) return base.value() < 1.0 ? ExtReal(0.0) : ExtReal::inf();
  return ext_pow(base, e.value());
}

}  // namespace permlab
