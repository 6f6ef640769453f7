#pragma once

#include <compare>
#include <iosfwd>
#include <string>

namespace kreg {

/// A value in R ∪ {+∞}. Regularizers and hard-constraint losses take the
/// value +∞, so it is a first-class value rather than a floating sentinel.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  // Implicit on purpose: finite doubles are extended reals. A double +inf
  // maps to +∞; NaN and -inf are rejected.
  ExtendedReal(double value);  // NOLINT(google-explicit-constructor)

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }

  /// Finite value; throws InvalidArgument on +∞.
  double value() const;
  /// Finite value, or IEEE +inf.
  double to_double() const;

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b);
  ExtendedReal& operator+=(ExtendedReal other) { return *this = *this + other; }
  /// Scaling by a nonnegative factor; 0·∞ = 0.
  friend ExtendedReal operator*(double factor, ExtendedReal a);
  friend ExtendedReal operator*(ExtendedReal a, double factor) { return factor * a; }
  /// Product of two nonnegative extended reals (γ·f with γ possibly +∞).
  friend ExtendedReal scale(ExtendedReal factor, ExtendedReal a);

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) {
      return a.infinite_ == b.infinite_ ? std::partial_ordering::equivalent
             : a.infinite_             ? std::partial_ordering::greater
                                       : std::partial_ordering::less;
    }
    return a.value_ <=> b.value_;
  }

  std::string to_string() const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

ExtendedReal max(ExtendedReal a, ExtendedReal b);
ExtendedReal min(ExtendedReal a, ExtendedReal b);

/// True when `a` lies below `b` by more than `tol`. Comparisons involving +∞
/// are exact: a finite value is below +∞, +∞ is below nothing.
bool below_by_more_than(ExtendedReal a, ExtendedReal b, double tol);

/// |a − b| ≤ tol for finite values; two infinities are equal; otherwise false.
bool nearly_equal(ExtendedReal a, ExtendedReal b, double tol);

std::ostream& operator<<(std::ostream& os, ExtendedReal value);

}  // namespace kreg
