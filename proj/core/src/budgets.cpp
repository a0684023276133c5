#include "famfair/budgets.hpp"

#include "famfair/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace famfair {

namespace {

const Dyadic kOne{1};
const Dyadic kZero{0};

}  // namespace

BudgetTable::BudgetTable(int r_max) : r_max_(r_max) {
  if (r_max < 0) throw ValidationError("budget table needs r_max >= 0");
  const size_t n = static_cast<size_t>(r_max + 1) * static_cast<size_t>(r_max + 1);
  b_.resize(n);
  c_.resize(n);
  for (int r = 0; r <= r_max; ++r) {
    for (int s = 1; s <= r; ++s) {
      b_[slot(r, s)] = min((B(r - 1, s) + B(r - 1, s - 1)).half(), B(r - 2, s - 1));
      c_[slot(r, s)] = (C(r - 1, s) + C(r - 1, s - 1)).half();
    }
  }
}

const Dyadic* BudgetTable::boundary(int r, int s) const {
  if (s <= 0) return &kOne;
  if (r < s) return &kZero;
  if (r > r_max_) {
    throw CapExceeded("budget table queried at r=" + std::to_string(r) + " beyond r_max=" + std::to_string(r_max_));
  }
  return nullptr;
}

const Dyadic& BudgetTable::B(int r, int s) const {
  if (const Dyadic* v = boundary(r, s)) return *v;
  return b_[slot(r, s)];
}

Dyadic BudgetTable::w(int r, int s) const { return B(r, s) - B(r - 1, s); }

const Dyadic& BudgetTable::C(int r, int s) const {
  if (const Dyadic* v = boundary(r, s)) return *v;
  return c_[slot(r, s)];
}

Dyadic BudgetTable::wC(int r, int s) const { return C(r, s) - C(r - 1, s); }

const BudgetTable& default_budgets() {
  static const BudgetTable table(64);
  return table;
}

Dyadic B(int r, int s) { return default_budgets().B(r, s); }
Dyadic w(int r, int s) { return default_budgets().w(r, s); }
Dyadic C(int r, int s) { return default_budgets().C(r, s); }
Dyadic wC(int r, int s) { return default_budgets().wC(r, s); }

Dyadic B_closed(int r, int s) {
  if (r < 0 || s < 0) throw ValidationError("B_closed needs r, s >= 0");
  BigInt sum = 0;
  for (int i = s; i <= r - s + 1; ++i) sum += binomial(r, i);
  return Dyadic::from_parts(sum, static_cast<unsigned>(r));
}

Rational maxh(int r, int s, int k) {
  if (r < 0 || k < 2) throw ValidationError("maxh needs r >= 0 and k >= 2");
  if (s <= 0) return 1;
  if (r <= k * s - 1) return 0;
  BigInt num = 0;
  BigInt km1_pow;
  for (int i = s; i <= r; ++i) {
    mpz_ui_pow_ui(km1_pow.get_mpz_t(), static_cast<unsigned long>(k - 1), static_cast<unsigned long>(r - i));
    num += km1_pow * binomial(r, i);
  }
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(r));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational maxh_finite(int r, int s, int k, int m) {
  if (k < 2 || m < 0 || r < 0 || k * m < r) throw ValidationError("maxh_finite needs k >= 2 and k*m >= r");
  BigInt num = 0;
  for (int i = std::max(s, 0); i <= r; ++i) num += binomial(m, i) * binomial(static_cast<long>(k - 1) * m, r - i);
  Rational out(num, binomial(static_cast<long>(k) * m, r));
  out.canonicalize();
  return out;
}

KGroupWeights::KGroupWeights(int k, double tolerance)
    : k_(k), L_(k == 2 ? 2.0 : std::pow(2.0, 1.0 / (k - 1))), tolerance_(tolerance) {
  if (k < 2) throw ValidationError("k-group weights need k >= 2");
}

double KGroupWeights::B(int r, int s) const {
  if (s <= 0) return 1.0;
  if (s > 1) throw ValidationError("k-group budgets are defined only for s in {0, 1}, got s=" + std::to_string(s));
  if (r <= 0) return 0.0;
  return std::max(0.0, 1.0 - std::pow(L_, -r));
}

double KGroupWeights::w(int r, int s) const {
  if (s <= 0) return 0.0;
  if (s > 1) throw ValidationError("k-group weights are defined only for s in {0, 1}, got s=" + std::to_string(s));
  if (r < 1) return 0.0;
  return (L_ - 1.0) / std::pow(L_, r);
}

}  // namespace famfair
