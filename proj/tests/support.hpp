#pragma once

#include "famfair/fairness.hpp"
#include "famfair/model.hpp"

#include <fmt/format.h>

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace famfair::testing {

inline std::vector<std::string> letters(int m) {
  std::vector<std::string> out;
  for (int g = 0; g < m; ++g) out.push_back(m <= 26 ? std::string(1, static_cast<char>('a' + g)) : fmt::format("g{}", g + 1));
  return out;
}

inline Agent binary_agent(Bundle desired) { return Agent{0, BinaryValuation{desired}, ""}; }

inline Agent additive_agent(std::vector<long> values) {
  std::vector<Rational> v;
  for (long x : values) v.emplace_back(x);
  return Agent{0, AdditiveValuation{std::move(v)}, ""};
}

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Bundle random_subset(std::mt19937_64& rng, int m, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  Bundle b;
  for (int g = 0; g < m; ++g) {
    if (coin(rng)) b.insert(g);
  }
  return b;
}

inline Instance random_binary(std::mt19937_64& rng, int k, int m, int n_max) {
  std::vector<std::vector<Agent>> groups(static_cast<size_t>(k));
  for (auto& group : groups) {
    const int n = uniform(rng, 1, n_max);
    for (int j = 0; j < n; ++j) group.push_back(binary_agent(random_subset(rng, m)));
  }
  return Instance(letters(m), std::move(groups));
}

inline Instance random_additive(std::mt19937_64& rng, int k, int m, int n_max, int v_max) {
  std::vector<std::vector<Agent>> groups(static_cast<size_t>(k));
  for (auto& group : groups) {
    const int n = uniform(rng, 1, n_max);
    for (int j = 0; j < n; ++j) {
      std::vector<long> values;
      for (int g = 0; g < m; ++g) values.push_back(uniform(rng, 0, v_max));
      group.push_back(additive_agent(values));
    }
  }
  return Instance(letters(m), std::move(groups));
}

/// Monotone table built by increasing popcount: each bundle is worth the best
/// of its maximal subsets plus a random increment.
inline TabularValuation random_monotone_table(std::mt19937_64& rng, int m, int step_max) {
  const size_t size = size_t{1} << m;
  std::vector<long> t(size, 0);
  std::vector<size_t> order(size);
  for (size_t i = 0; i < size; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [](size_t a, size_t b) { return std::popcount(a) < std::popcount(b); });
  for (size_t mask : order) {
    if (mask == 0) continue;
    long base = 0;
    for (int g = 0; g < m; ++g) {
      if ((mask >> g) & 1U) base = std::max(base, t[mask & ~(size_t{1} << g)]);
    }
    t[mask] = base + uniform(rng, 0, step_max);
  }
  TabularValuation v;
  for (long x : t) v.table.emplace_back(x);
  return v;
}

inline Instance random_tabular(std::mt19937_64& rng, int k, int m, int n_max) {
  std::vector<std::vector<Agent>> groups(static_cast<size_t>(k));
  for (auto& group : groups) {
    const int n = uniform(rng, 1, n_max);
    for (int j = 0; j < n; ++j) group.push_back(Agent{0, random_monotone_table(rng, m, 3), ""});
  }
  return Instance(letters(m), std::move(groups));
}

/// Two groups with the same multiset of binary members.
inline Instance random_identical_pair(std::mt19937_64& rng, int m, int n_max) {
  std::vector<Agent> group;
  const int n = uniform(rng, 1, n_max);
  for (int j = 0; j < n; ++j) group.push_back(binary_agent(random_subset(rng, m)));
  return Instance(letters(m), {group, group});
}

inline Allocation random_allocation(std::mt19937_64& rng, int k, int m) {
  std::vector<int> assignment;
  for (int g = 0; g < m; ++g) assignment.push_back(uniform(rng, 0, k - 1));
  return Allocation(assignment, k);
}

// Reference implementations written straight from the definitions, used to
// cross-check the library.
namespace ref {

inline Rational budget(int r, int s) {
  static std::map<std::pair<int, int>, Rational> memo;
  if (s <= 0) return 1;
  if (r < s) return 0;
  auto it = memo.find({r, s});
  if (it != memo.end()) return it->second;
  Rational avg = (budget(r - 1, s) + budget(r - 1, s - 1)) / 2;
  Rational skip = budget(r - 2, s - 1);
  Rational v = avg < skip ? avg : skip;
  memo.emplace(std::make_pair(r, s), v);
  return v;
}

inline Rational coin_budget(int r, int s) {
  static std::map<std::pair<int, int>, Rational> memo;
  if (s <= 0) return 1;
  if (r < s) return 0;
  auto it = memo.find({r, s});
  if (it != memo.end()) return it->second;
  Rational v = (coin_budget(r - 1, s) + coin_budget(r - 1, s - 1)) / 2;
  memo.emplace(std::make_pair(r, s), v);
  return v;
}

/// Pascal triangle entry.
inline BigInt choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<BigInt> row(static_cast<size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j >= 1; --j) row[static_cast<size_t>(j)] += row[static_cast<size_t>(j) - 1];
  }
  return row[static_cast<size_t>(k)];
}

inline Rational value(const Valuation& v, Bundle b) {
  if (const auto* bin = std::get_if<BinaryValuation>(&v)) return (bin->desired & b).size();
  if (const auto* add = std::get_if<AdditiveValuation>(&v)) {
    Rational sum = 0;
    for (int g : b.indices()) sum += add->values[static_cast<size_t>(g)];
    return sum;
  }
  return std::get<TabularValuation>(v).table[b.bits()];
}

/// All subsets of `from` with at most c elements.
inline std::vector<Bundle> small_subsets(Bundle from, int c) {
  std::vector<Bundle> out;
  const std::uint64_t bits = from.bits();
  std::uint64_t sub = bits;
  while (true) {
    if (std::popcount(sub) <= c) out.emplace_back(sub);
    if (sub == 0) break;
    sub = (sub - 1) & bits;
  }
  return out;
}

inline bool efc(const Valuation& v, const std::vector<Bundle>& bundles, int own, int c) {
  const Rational mine = value(v, bundles[static_cast<size_t>(own)]);
  for (size_t i = 0; i < bundles.size(); ++i) {
    if (static_cast<int>(i) == own) continue;
    bool ok = false;
    for (Bundle removed : small_subsets(bundles[i], c)) ok = ok || mine >= value(v, bundles[i] - removed);
    if (!ok) return false;
  }
  return true;
}

inline bool propc(const Valuation& v, const std::vector<Bundle>& bundles, int own, int c, int m) {
  const Bundle all = Bundle::all(m);
  const Rational mine = value(v, bundles[static_cast<size_t>(own)]);
  const int k = static_cast<int>(bundles.size());
  for (Bundle removed : small_subsets(all - bundles[static_cast<size_t>(own)], c)) {
    if (mine * k >= value(v, all - removed)) return true;
  }
  return false;
}

/// Maximin share by trying every assignment of the goods to c parts.
inline Rational mms(const Valuation& v, int c, int m) {
  Rational best = -1;
  std::vector<int> part(static_cast<size_t>(m), 0);
  while (true) {
    std::vector<Bundle> parts(static_cast<size_t>(c));
    for (int g = 0; g < m; ++g) parts[static_cast<size_t>(part[static_cast<size_t>(g)])].insert(g);
    Rational worst = value(v, parts[0]);
    for (const auto& p : parts) worst = std::min(worst, value(v, p));
    best = std::max(best, worst);
    int g = m - 1;
    while (g >= 0 && ++part[static_cast<size_t>(g)] == c) part[static_cast<size_t>(g--)] = 0;
    if (g < 0) break;
  }
  return best;
}

}  // namespace ref

}  // namespace famfair::testing
