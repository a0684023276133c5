#include "famfair/dyadic.hpp"

#include <cmath>

namespace famfair {

Dyadic Dyadic::from_parts(BigInt numerator, unsigned exponent) {
  Dyadic d;
  d.numerator_ = std::move(numerator);
  d.exponent_ = exponent;
  d.canonicalize();
  return d;
}

Dyadic Dyadic::inverse_power_of_two(unsigned exponent) { return from_parts(BigInt(1), exponent); }

void Dyadic::canonicalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  mp_bitcnt_t twos = mpz_scan1(numerator_.get_mpz_t(), 0);
  auto shift = static_cast<unsigned>(std::min<mp_bitcnt_t>(twos, exponent_));
  if (shift > 0) {
    mpz_tdiv_q_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), shift);
    exponent_ -= shift;
  }
}

Dyadic Dyadic::half() const {
  if (is_zero()) return *this;
  Dyadic d = *this;
  if (mpz_even_p(d.numerator_.get_mpz_t()) != 0) {
    mpz_tdiv_q_2exp(d.numerator_.get_mpz_t(), d.numerator_.get_mpz_t(), 1);
  } else {
    ++d.exponent_;
  }
  return d;
}

Dyadic Dyadic::operator-() const {
  Dyadic d = *this;
  d.numerator_ = -d.numerator_;
  return d;
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
  if (exponent_ >= other.exponent_) {
    BigInt rhs;
    mpz_mul_2exp(rhs.get_mpz_t(), other.numerator_.get_mpz_t(), exponent_ - other.exponent_);
    numerator_ += rhs;
  } else {
    mpz_mul_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), other.exponent_ - exponent_);
    numerator_ += other.numerator_;
    exponent_ = other.exponent_;
  }
  canonicalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& other) { return *this += -other; }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  unsigned e = std::max(a.exponent_, b.exponent_);
  BigInt x, y;
  mpz_mul_2exp(x.get_mpz_t(), a.numerator_.get_mpz_t(), e - a.exponent_);
  mpz_mul_2exp(y.get_mpz_t(), b.numerator_.get_mpz_t(), e - b.exponent_);
  int c = cmp(x, y);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Dyadic::to_rational() const {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, exponent_);
  Rational q(numerator_, den);
  q.canonicalize();
  return q;
}

double Dyadic::to_double() const {
  return std::ldexp(numerator_.get_d(), -static_cast<int>(exponent_));
}

std::string Dyadic::to_decimal() const {
  // n / 2^e = n * 5^e / 10^e, which has exactly e decimal places.
  bool negative = numerator_ < 0;
  BigInt magnitude = negative ? BigInt(-numerator_) : numerator_;
  BigInt five_pow;
  mpz_ui_pow_ui(five_pow.get_mpz_t(), 5, exponent_);
  std::string digits = BigInt(magnitude * five_pow).get_str();
  if (exponent_ > 0) {
    if (digits.size() <= exponent_) digits.insert(0, exponent_ + 1 - digits.size(), '0');
    digits.insert(digits.size() - exponent_, ".");
  }
  return negative ? "-" + digits : digits;
}

std::string Dyadic::to_trace_string() const {
  if (is_zero()) return "0";
  std::string s = to_decimal();
  if (exponent_ == 0) s += ".0";
  return s;
}

std::string Dyadic::to_fixed(int digits) const { return famfair::to_fixed(to_rational(), digits); }

std::string Dyadic::to_fraction() const { return to_string(to_rational()); }

}  // namespace famfair
