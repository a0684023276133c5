#pragma once

#include "famfair/dyadic.hpp"
#include "famfair/rational.hpp"

#include <vector>

namespace famfair {

/// Memoized two-group budget B(r,s) and coin-toss budget C(r,s), exact.
/// Arguments outside the stored range resolve through the boundary rules;
/// r > r_max throws CapExceeded.
class BudgetTable {
 public:
  explicit BudgetTable(int r_max = 64);

  int r_max() const { return r_max_; }

  const Dyadic& B(int r, int s) const;
  /// w(r,s) = B(r,s) - B(r-1,s).
  Dyadic w(int r, int s) const;
  const Dyadic& C(int r, int s) const;
  /// C(r,s) - C(r-1,s).
  Dyadic wC(int r, int s) const;

 private:
  const Dyadic* boundary(int r, int s) const;
  size_t slot(int r, int s) const { return static_cast<size_t>(r) * static_cast<size_t>(r_max_ + 1) + static_cast<size_t>(s); }

  int r_max_;
  std::vector<Dyadic> b_;
  std::vector<Dyadic> c_;
};

/// Shared table with r_max = 64, built on first use.
const BudgetTable& default_budgets();

Dyadic B(int r, int s);
Dyadic w(int r, int s);
Dyadic C(int r, int s);
Dyadic wC(int r, int s);

/// 2^-r * sum_{i=s}^{r-s+1} binom(r,i), for r, s >= 0.
Dyadic B_closed(int r, int s);

/// Upper bound on the democratic fraction for agents wanting r goods and
/// needing s of them, k groups, in the limit of many goods (1 when s <= 0).
Rational maxh(int r, int s, int k);
/// The same bound for an instance with k*m goods.
Rational maxh_finite(int r, int s, int k, int m);

/// Budgets and weights for k-group RWAV, defined for s in {0, 1}.
/// Negative s is treated as 0.
class KGroupWeights {
 public:
  explicit KGroupWeights(int k, double tolerance = 1e-12);

  int k() const { return k_; }
  /// L_k = 2^(1/(k-1)).
  double L() const { return L_; }
  double tolerance() const { return tolerance_; }

  double B(int r, int s) const;
  double w(int r, int s) const;

 private:
  int k_;
  double L_;
  double tolerance_;
};

}  // namespace famfair
