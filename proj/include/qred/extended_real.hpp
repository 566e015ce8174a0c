#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace qred {

/// A value in (-inf, +inf] with an explicit +inf tag.
///
/// Arithmetic follows the extended-real conventions used for relative
/// entropies: x + inf = inf, c * inf = inf for c > 0, 0 * inf = 0.
/// The indeterminate form inf - inf throws instead of producing a value.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  ExtendedReal(double v) : value_(v) {  // NOLINT: implicit on purpose
    if (std::isnan(v)) throw std::domain_error("ExtendedReal: NaN is not a value");
    if (v == -std::numeric_limits<double>::infinity())
      throw std::domain_error("ExtendedReal: -inf is not representable");
    if (v == std::numeric_limits<double>::infinity()) {
      infinite_ = true;
      value_ = 0.0;
    }
  }

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }

  /// Finite payload. Throws on +inf.
  double value() const {
    if (infinite_) throw std::domain_error("ExtendedReal: value() of +inf");
    return value_;
  }

  /// Payload as a double, +inf mapped to the IEEE infinity.
  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }

  friend ExtendedReal operator-(ExtendedReal a, ExtendedReal b) {
    if (b.infinite_) {
      throw std::domain_error(a.infinite_ ? "ExtendedReal: inf - inf is undefined"
                                          : "ExtendedReal: finite - inf is not representable");
    }
    if (a.infinite_) return infinity();
    return ExtendedReal(a.value_ - b.value_);
  }

  ExtendedReal& operator+=(ExtendedReal o) { return *this = *this + o; }
  ExtendedReal& operator-=(ExtendedReal o) { return *this = *this - o; }

  friend ExtendedReal operator*(double c, ExtendedReal a) {
    if (!a.infinite_) return ExtendedReal(c * a.value_);
    if (c > 0) return infinity();
    if (c == 0) return ExtendedReal(0.0);
    throw std::domain_error("ExtendedReal: negative multiple of +inf");
  }
  friend ExtendedReal operator*(ExtendedReal a, double c) { return c * a; }

  friend bool operator==(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal x) {
    if (x.infinite_) return os << "inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

inline ExtendedReal max(ExtendedReal a, ExtendedReal b) { return a < b ? b : a; }
inline ExtendedReal min(ExtendedReal a, ExtendedReal b) { return b < a ? b : a; }

}  // namespace qred
