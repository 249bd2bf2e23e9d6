#pragma once

#include <limits>
#include <ostream>

#include "depnet/errors.hpp"

namespace depnet {

/// Extended real: a finite double or +infinity, kept as an explicit tag
/// instead of an IEEE sentinel. Divergences return this type; it keeps
/// inf - inf and 0 * inf out of the arithmetic (0 * inf is defined as 0,
/// matching the measure-theoretic convention used throughout).
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const noexcept { return !infinite_; }
  constexpr bool is_infinite() const noexcept { return infinite_; }

  /// Finite value; calling this on infinity is a DomainError.
  double value() const {
    if (infinite_) throw DomainError("ExtReal::value() called on infinity");
    return value_;
  }

  /// Finite value, or IEEE +inf when infinite (for printing/formatting).
  double as_double() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  ExtReal& operator+=(const ExtReal& o) noexcept {
    if (o.infinite_) infinite_ = true;
    if (!infinite_) value_ += o.value_;
    return *this;
  }

  friend ExtReal operator+(ExtReal a, const ExtReal& b) noexcept { return a += b; }

  /// Multiply by a non-negative weight; 0 * infinity == 0.
  ExtReal scaled_by(double c) const {
    if (c < 0.0) throw DomainError("ExtReal::scaled_by: negative weight");
    if (c == 0.0) return ExtReal(0.0);
    if (infinite_) return infinity();
    return ExtReal(c * value_);
  }

  /// a - b with b finite (or both infinite is rejected); inf - finite = inf.
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b) {
    if (b.infinite_) throw DomainError("ExtReal: subtracting infinity");
    if (a.infinite_) return infinity();
    return ExtReal(a.value_ - b.value_);
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) noexcept {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }

  friend constexpr bool operator<=(const ExtReal& a, const ExtReal& b) noexcept {
    return a < b || a == b;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& v) {
    if (v.infinite_) return os << "inf";
    return os << v.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace depnet
