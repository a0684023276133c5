#pragma once

#include "famfair/rational.hpp"

#include <compare>
#include <string>

namespace famfair {

/// Exact number of the form numerator / 2^exponent, kept canonical
/// (odd numerator, or zero with exponent 0).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value) : numerator_(value) {}  // NOLINT(google-explicit-constructor)

  static Dyadic from_parts(BigInt numerator, unsigned exponent);
  /// 2^-exponent.
  static Dyadic inverse_power_of_two(unsigned exponent);

  const BigInt& numerator() const { return numerator_; }
  unsigned exponent() const { return exponent_; }

  Dyadic half() const;
  Dyadic operator-() const;
  Dyadic& operator+=(const Dyadic& other);
  Dyadic& operator-=(const Dyadic& other);

  friend Dyadic operator+(Dyadic lhs, const Dyadic& rhs) { return lhs += rhs; }
  friend Dyadic operator-(Dyadic lhs, const Dyadic& rhs) { return lhs -= rhs; }
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.numerator_ == b.numerator_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  bool is_zero() const { return numerator_ == 0; }
  Rational to_rational() const;
  double to_double() const;

  /// Exact decimal expansion, e.g. "0.625", "2", "-0.0625".
  std::string to_decimal() const;
  /// Same as to_decimal() but integral non-zero values get a trailing ".0"
  /// ("2.0"), matching the float rendering used in protocol traces.
  std::string to_trace_string() const;
  /// Rounded half-up to `digits` decimals.
  std::string to_fixed(int digits) const;
  /// "p/q" form with q a power of two.
  std::string to_fraction() const;

 private:
  void canonicalize();

  BigInt numerator_{0};
  unsigned exponent_ = 0;
};

inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

}  // namespace famfair
