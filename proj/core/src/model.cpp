#include "famfair/model.hpp"

#include "famfair/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace famfair {

namespace {

void check_valuation(const Valuation& v, int m, const std::string& who) {
  if (const auto* b = std::get_if<BinaryValuation>(&v)) {
    if (!b->desired.subset_of(Bundle::all(m))) throw ValidationError("agent " + who + ": desired good out of range");
    return;
  }
  if (const auto* a = std::get_if<AdditiveValuation>(&v)) {
    if (static_cast<int>(a->values.size()) != m) {
      throw ValidationError("agent " + who + ": additive valuation has " + std::to_string(a->values.size()) +
                            " values but there are " + std::to_string(m) + " goods");
    }
    for (const auto& x : a->values) {
      if (x < 0) throw ValidationError("agent " + who + ": negative value " + to_string(x));
    }
    return;
  }
  const auto& t = std::get<TabularValuation>(v);
  if (m > kMaxTabularGoods) {
    throw ValidationError("agent " + who + ": tabular valuations need m <= " + std::to_string(kMaxTabularGoods));
  }
  if (t.table.size() != (size_t{1} << m)) {
    throw ValidationError("agent " + who + ": tabular valuation must list all " + std::to_string(size_t{1} << m) +
                          " bundles");
  }
  for (size_t mask = 0; mask < t.table.size(); ++mask) {
    if (t.table[mask] < 0) throw ValidationError("agent " + who + ": negative bundle value");
    // Monotone iff every bundle is worth at least each of its one-smaller subsets.
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      size_t sub = mask & ~(rest & -rest);
      if (t.table[sub] > t.table[mask]) {
        throw ValidationError("agent " + who + ": tabular valuation is not monotone (bundle mask " +
                              std::to_string(sub) + " worth more than its superset " + std::to_string(mask) + ")");
      }
    }
  }
}

}  // namespace

Instance::Instance(std::vector<std::string> good_labels, std::vector<std::vector<Agent>> groups,
                   std::vector<int> good_order)
    : groups_(std::move(groups)), good_order_(std::move(good_order)) {
  const int m = static_cast<int>(good_labels.size());
  if (m > kMaxGoods) throw ValidationError("at most " + std::to_string(kMaxGoods) + " goods are supported");
  std::set<std::string> seen;
  for (int i = 0; i < m; ++i) {
    auto& label = good_labels[static_cast<size_t>(i)];
    if (label.empty()) throw ValidationError("good " + std::to_string(i) + " has an empty label");
    if (!seen.insert(label).second) throw ValidationError("duplicate good label '" + label + "'");
    goods_.push_back(GoodId{i, std::move(label)});
  }
  if (groups_.size() < 2) throw ValidationError("an instance needs at least 2 groups (k >= 2)");
  for (size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].empty()) throw ValidationError("group " + std::to_string(i + 1) + " is empty");
    for (size_t j = 0; j < groups_[i].size(); ++j) {
      auto& agent = groups_[i][j];
      agent.group = static_cast<int>(i);
      if (agent.id.empty()) agent.id = "G" + std::to_string(i + 1) + "-" + std::to_string(j + 1);
      check_valuation(agent.valuation, m, agent.id);
    }
  }
  if (good_order_.empty()) {
    good_order_.resize(static_cast<size_t>(m));
    std::iota(good_order_.begin(), good_order_.end(), 0);
  } else {
    std::vector<int> sorted = good_order_;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(static_cast<size_t>(m));
    std::iota(expected.begin(), expected.end(), 0);
    if (sorted != expected) throw ValidationError("good order must be a permutation of all goods");
  }
}

int Instance::index_of(std::string_view label) const {
  for (const auto& g : goods_) {
    if (g.label == label) return g.index;
  }
  throw ValidationError("unknown good '" + std::string(label) + "'");
}

int Instance::agent_count() const {
  int n = 0;
  for (const auto& g : groups_) n += static_cast<int>(g.size());
  return n;
}

bool Instance::all_binary() const {
  for (const auto& g : groups_) {
    for (const auto& a : g) {
      if (!std::holds_alternative<BinaryValuation>(a.valuation)) return false;
    }
  }
  return true;
}

Instance Instance::with_order(std::vector<int> good_order) const {
  std::vector<std::string> labels;
  for (const auto& g : goods_) labels.push_back(g.label);
  return Instance(std::move(labels), groups_, std::move(good_order));
}

Allocation::Allocation(std::vector<int> assignment, int k) : assignment_(std::move(assignment)), k_(k) {
  if (k_ < 1) throw ValidationError("allocation needs at least one group");
  for (size_t g = 0; g < assignment_.size(); ++g) {
    if (assignment_[g] < 0 || assignment_[g] >= k_) {
      throw ValidationError("good " + std::to_string(g) + " is not assigned to a valid group");
    }
  }
}

Allocation Allocation::from_bundles(std::span<const Bundle> bundles, int m) {
  std::vector<int> assignment(static_cast<size_t>(m), -1);
  for (size_t i = 0; i < bundles.size(); ++i) {
    for (int g : bundles[i].indices()) {
      if (g >= m) throw ValidationError("bundle contains good " + std::to_string(g) + " outside the instance");
      if (assignment[static_cast<size_t>(g)] != -1) {
        throw ValidationError("good " + std::to_string(g) + " appears in more than one bundle");
      }
      assignment[static_cast<size_t>(g)] = static_cast<int>(i);
    }
  }
  for (int g = 0; g < m; ++g) {
    if (assignment[static_cast<size_t>(g)] == -1) {
      throw ValidationError("good " + std::to_string(g) + " is not allocated");
    }
  }
  return Allocation(std::move(assignment), static_cast<int>(bundles.size()));
}

Rational value_of(const Valuation& valuation, Bundle bundle) {
  return std::visit(
      [bundle](const auto& v) -> Rational {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BinaryValuation>) {
          return Rational((v.desired & bundle).size());
        } else if constexpr (std::is_same_v<T, AdditiveValuation>) {
          Rational sum = 0;
          for (std::uint64_t b = bundle.bits(); b != 0; b &= b - 1) {
            sum += v.values[static_cast<size_t>(std::countr_zero(b))];
          }
          return sum;
        } else {
          return v.table[static_cast<size_t>(bundle.bits())];
        }
      },
      valuation);
}

Rational value_of(const Agent& agent, Bundle bundle) { return value_of(agent.valuation, bundle); }

Rational good_value(const Valuation& valuation, int good) {
  return value_of(valuation, Bundle(std::uint64_t{1} << good));
}

int dimension(const Valuation& valuation) {
  if (const auto* a = std::get_if<AdditiveValuation>(&valuation)) return static_cast<int>(a->values.size());
  if (const auto* t = std::get_if<TabularValuation>(&valuation)) {
    return std::countr_zero(t->table.size());
  }
  return -1;  // binary valuations carry no explicit dimension
}

std::vector<Bundle> bundles_of(const Allocation& allocation) {
  std::vector<Bundle> out(static_cast<size_t>(allocation.k()));
  for (int g = 0; g < allocation.m(); ++g) out[static_cast<size_t>(allocation.owner(g))].insert(g);
  return out;
}

Instance binarize(const Instance& instance, int c) {
  const int m = instance.m();
  std::vector<std::vector<Agent>> groups = instance.groups();
  for (auto& group : groups) {
    for (auto& agent : group) {
      if (std::holds_alternative<BinaryValuation>(agent.valuation)) continue;
      std::vector<std::pair<Rational, int>> ranked;
      for (int g = 0; g < m; ++g) ranked.emplace_back(good_value(agent.valuation, g), g);
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      Bundle top;
      for (int i = 0; i < std::min(c, m); ++i) top.insert(ranked[static_cast<size_t>(i)].second);
      agent.valuation = BinaryValuation{top};
    }
  }
  std::vector<std::string> labels;
  for (const auto& g : instance.goods()) labels.push_back(g.label);
  return Instance(std::move(labels), std::move(groups), instance.good_order());
}

Instance select_groups(const Instance& instance, std::span<const int> groups) {
  std::vector<std::vector<Agent>> picked;
  for (int i : groups) {
    if (i < 0 || i >= instance.k()) throw ValidationError("group " + std::to_string(i + 1) + " does not exist");
    picked.push_back(instance.group(i));
  }
  std::vector<std::string> labels;
  for (const auto& g : instance.goods()) labels.push_back(g.label);
  return Instance(std::move(labels), std::move(picked), instance.good_order());
}

}  // namespace famfair
