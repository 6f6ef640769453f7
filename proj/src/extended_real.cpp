#include "kreg/extended_real.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "kreg/errors.hpp"

namespace kreg {

ExtendedReal::ExtendedReal(double value) {
  if (std::isnan(value)) throw InvalidArgument("extended real cannot be NaN");
  if (std::isinf(value)) {
    if (value < 0) throw InvalidArgument("extended real cannot be -inf");
    infinite_ = true;
    return;
  }
  value_ = value;
}

double ExtendedReal::value() const {
  if (infinite_) throw InvalidArgument("value() called on +inf");
  return value_;
}

double ExtendedReal::to_double() const { return infinite_ ? HUGE_VAL : value_; }

ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
  if (a.infinite_ || b.infinite_) return ExtendedReal::infinity();
  return ExtendedReal(a.value_ + b.value_);
}

ExtendedReal operator*(double factor, ExtendedReal a) {
  if (std::isnan(factor) || factor < 0) throw InvalidArgument("extended real scaled by a negative or NaN factor");
  if (factor == 0.0) return ExtendedReal(0.0);
  if (a.infinite_ || std::isinf(factor)) return ExtendedReal::infinity();
  return ExtendedReal(factor * a.value_);
}

ExtendedReal scale(ExtendedReal factor, ExtendedReal a) {
  if (factor.is_finite()) return factor.value_ * a;
  if (a.is_finite() && a.value_ == 0.0) return ExtendedReal(0.0);
  if (a.is_finite() && a.value_ < 0) throw InvalidArgument("+inf scaling of a negative value");
  return ExtendedReal::infinity();
}

ExtendedReal max(ExtendedReal a, ExtendedReal b) { return a < b ? b : a; }
ExtendedReal min(ExtendedReal a, ExtendedReal b) { return b < a ? b : a; }

bool below_by_more_than(ExtendedReal a, ExtendedReal b, double tol) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.value() < b.value() - tol;
}

bool nearly_equal(ExtendedReal a, ExtendedReal b, double tol) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  return std::abs(a.value() - b.value()) <= tol;
}

std::string ExtendedReal::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, ExtendedReal value) {
  if (value.is_infinite()) return os << "inf";
  return os << value.value();
}

}  // namespace kreg
