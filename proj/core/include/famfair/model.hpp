#pragma once

#include "famfair/rational.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace famfair {

/// Largest supported number of goods (bundles are 64-bit masks).
inline constexpr int kMaxGoods = 64;
/// Largest number of goods for which a tabular valuation may be given.
inline constexpr int kMaxTabularGoods = 16;

struct GoodId {
  int index = 0;
  std::string label;

  friend bool operator==(const GoodId&, const GoodId&) = default;
};

/// A set of goods, stored as a bit mask over good indices.
class Bundle {
 public:
  constexpr Bundle() = default;
  constexpr explicit Bundle(std::uint64_t bits) : bits_(bits) {}

  static Bundle of(std::initializer_list<int> goods) {
    Bundle b;
    for (int g : goods) b.insert(g);
    return b;
  }
  /// {0, ..., m-1}.
  static constexpr Bundle all(int m) {
    return Bundle(m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int g) const { return ((bits_ >> g) & 1U) != 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool subset_of(Bundle other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr void insert(int g) { bits_ |= std::uint64_t{1} << g; }
  constexpr void erase(int g) { bits_ &= ~(std::uint64_t{1} << g); }

  constexpr Bundle operator&(Bundle o) const { return Bundle(bits_ & o.bits_); }
  constexpr Bundle operator|(Bundle o) const { return Bundle(bits_ | o.bits_); }
  /// Set difference.
  constexpr Bundle operator-(Bundle o) const { return Bundle(bits_ & ~o.bits_); }

  /// Indices in increasing order.
  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  friend constexpr bool operator==(Bundle, Bundle) = default;

 private:
  std::uint64_t bits_ = 0;
};

struct BinaryValuation {
  Bundle desired;
  friend bool operator==(const BinaryValuation&, const BinaryValuation&) = default;
};

struct AdditiveValuation {
  std::vector<Rational> values;
  friend bool operator==(const AdditiveValuation&, const AdditiveValuation&) = default;
};

/// Value of every bundle, indexed by the bundle's bit mask.
struct TabularValuation {
  std::vector<Rational> table;
  friend bool operator==(const TabularValuation&, const TabularValuation&) = default;
};

using Valuation = std::variant<BinaryValuation, AdditiveValuation, TabularValuation>;

struct Agent {
  int group = 0;
  Valuation valuation;
  std::string id;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Goods plus k >= 2 nonempty groups of agents. Immutable once built; the
/// constructor validates every invariant and throws ValidationError.
class Instance {
 public:
  /// `good_order` lists good indices in line-protocol order; empty means
  /// input order. Each agent's `group` field is overwritten with its position.
  Instance(std::vector<std::string> good_labels, std::vector<std::vector<Agent>> groups,
           std::vector<int> good_order = {});

  int m() const { return static_cast<int>(goods_.size()); }
  int k() const { return static_cast<int>(groups_.size()); }
  const std::vector<GoodId>& goods() const { return goods_; }
  const std::string& label(int good) const { return goods_.at(static_cast<size_t>(good)).label; }
  /// Throws ValidationError for unknown labels.
  int index_of(std::string_view label) const;

  const std::vector<std::vector<Agent>>& groups() const { return groups_; }
  const std::vector<Agent>& group(int i) const { return groups_.at(static_cast<size_t>(i)); }
  int group_size(int i) const { return static_cast<int>(group(i).size()); }
  int agent_count() const;

  const std::vector<int>& good_order() const { return good_order_; }
  Bundle all_goods() const { return Bundle::all(m()); }

  bool all_binary() const;
  Instance with_order(std::vector<int> good_order) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<GoodId> goods_;
  std::vector<std::vector<Agent>> groups_;
  std::vector<int> good_order_;
};

/// Total assignment of goods to groups.
class Allocation {
 public:
  Allocation(std::vector<int> assignment, int k);
  /// Builds an allocation from k disjoint bundles covering all m goods.
  static Allocation from_bundles(std::span<const Bundle> bundles, int m);

  int k() const { return k_; }
  int m() const { return static_cast<int>(assignment_.size()); }
  const std::vector<int>& assignment() const { return assignment_; }
  int owner(int good) const { return assignment_.at(static_cast<size_t>(good)); }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<int> assignment_;
  int k_;
};

Rational value_of(const Valuation& valuation, Bundle bundle);
Rational value_of(const Agent& agent, Bundle bundle);
/// Value of the single good `good`.
Rational good_value(const Valuation& valuation, int good);
/// Number of goods the valuation was declared over.
int dimension(const Valuation& valuation);

std::vector<Bundle> bundles_of(const Allocation& allocation);

/// Converts every agent to a binary agent desiring its `c` highest-valued
/// goods (ties to the lower index). Binary agents are left unchanged.
Instance binarize(const Instance& instance, int c);

/// Sub-instance containing only the listed groups, in the listed order.
Instance select_groups(const Instance& instance, std::span<const int> groups);

}  // namespace famfair
