#include "support.hpp"

#include "famfair/budgets.hpp"
#include "famfair/dyadic.hpp"
#include "famfair/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace famfair;
using namespace famfair::testing;

TEST_CASE("dyadic arithmetic") {
  const Dyadic a = Dyadic::from_parts(5, 3);  // 5/8
  const Dyadic b = Dyadic::inverse_power_of_two(1);
  CHECK((a + b).to_rational() == Rational(9, 8));
  CHECK((a - b).to_rational() == Rational(1, 8));
  CHECK(a.half().to_rational() == Rational(5, 16));
  CHECK(Dyadic::from_parts(4, 3) == b);
  CHECK(b < a);
  CHECK(a.to_decimal() == "0.625");
  CHECK(Dyadic(2).to_trace_string() == "2.0");
  CHECK(Dyadic(0).to_trace_string() == "0");
  CHECK(Dyadic::inverse_power_of_two(4).to_fixed(3) == "0.063");
  CHECK((-a).to_decimal() == "-0.625");
  CHECK(a.to_fraction() == "5/8");
}

TEST_CASE("budgets match the reference recurrences") {
  for (int r = 0; r <= 40; ++r) {
    for (int s = -1; s <= r + 1; ++s) {
      INFO("r=" << r << " s=" << s);
      CHECK(B(r, s).to_rational() == ref::budget(r, s));
      CHECK(C(r, s).to_rational() == ref::coin_budget(r, s));
      if (r >= 1) {
        CHECK(w(r, s).to_rational() == ref::budget(r, s) - ref::budget(r - 1, s));
        CHECK(wC(r, s).to_rational() == ref::coin_budget(r, s) - ref::coin_budget(r - 1, s));
      }
    }
  }
}

TEST_CASE("closed form") {
  for (int r = 0; r <= 40; ++r) {
    for (int s = 0; s <= r; ++s) {
      BigInt sum = 0;
      for (int i = s; i <= r - s + 1; ++i) sum += ref::choose(r, i);
      Rational expected(sum, BigInt(BigInt(1) << r));
      expected.canonicalize();
      CHECK(B_closed(r, s).to_rational() == expected);
    }
  }
}

TEST_CASE("known values") {
  CHECK(B(2, 1).to_rational() == Rational(3, 4));
  CHECK(B(3, 1).to_rational() == Rational(7, 8));
  CHECK(B(4, 2).to_rational() == Rational(5, 8));
  CHECK(w(3, 2).to_rational() == Rational(3, 8));
  CHECK(C(3, 2).to_rational() == Rational(1, 2));
  CHECK(B(1, 1).to_rational() == Rational(1, 2));
  CHECK(B(0, 0).to_rational() == 1);
}

TEST_CASE("budget table limits") {
  const BudgetTable small(8);
  CHECK(small.B(8, 2) == B(8, 2));
  CHECK(small.B(3, 7).is_zero());
  CHECK_THROWS_AS(small.B(9, 1), CapExceeded);
  CHECK_THROWS_AS(B(65, 1), CapExceeded);
}

TEST_CASE("upper bounds") {
  for (int k = 2; k <= 4; ++k) {
    for (int r = 0; r <= 12; ++r) {
      for (int s = 1; s <= r; ++s) {
        BigInt num = 0;
        BigInt den = 1;
        for (int i = 0; i < r; ++i) den *= k;
        for (int i = s; i <= r; ++i) {
          BigInt rest = 1;
          for (int j = 0; j < r - i; ++j) rest *= k - 1;
          num += ref::choose(r, i) * rest;
        }
        Rational tail(num, den);
        tail.canonicalize();
        INFO("r=" << r << " s=" << s << " k=" << k);
        CHECK(maxh(r, s, k) == (r <= k * s - 1 ? Rational(0) : tail));
      }
      CHECK(maxh(r, 0, k) == 1);
    }
  }
  CHECK(maxh(2, 1, 2) == Rational(3, 4));
  CHECK(maxh_finite(2, 1, 2, 2) == Rational(5, 6));
  CHECK(maxh_finite(4, 2, 2, 4) == Rational(53, 70));
  CHECK_THROWS_AS(maxh(-1, 1, 2), ValidationError);
  CHECK_THROWS_AS(maxh_finite(5, 1, 2, 2), ValidationError);
}

TEST_CASE("k-group weights") {
  for (int k = 2; k <= 6; ++k) {
    const KGroupWeights kw(k);
    CHECK(std::pow(kw.L(), k - 1) == doctest::Approx(2.0));
    CHECK(kw.B(5, 0) == 1.0);
    CHECK(kw.B(0, 1) == 0.0);
    for (int r = 1; r <= 20; ++r) {
      CHECK(kw.w(r, 1) == doctest::Approx(kw.B(r, 1) - kw.B(r - 1, 1)));
      CHECK(kw.B(r, 1) == doctest::Approx(1 - std::pow(2.0, -static_cast<double>(r) / (k - 1))));
    }
    CHECK_THROWS_AS(kw.B(4, 2), ValidationError);
  }
  const KGroupWeights two(2);
  for (int r = 0; r <= 10; ++r) CHECK(two.B(r, 1) == doctest::Approx(B(r, 1).to_double()));
}
