#include "famfair/fairness.hpp"

#include "famfair/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <regex>

namespace famfair {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), size_t{0});
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

int parse_small_int(const std::string& digits) {
  if (digits.size() > 6) throw ValidationError("criterion parameter too large: " + digits);
  return std::stoi(digits);
}

/// Minimum over C subset of `removable`, |C| = min(c, |removable|), of the
/// value of base \ C. Removing more goods never raises a monotone value, so
/// the largest admissible C is enough.
Rational min_value_removing(const Valuation& valuation, Bundle base, Bundle removable, int c) {
  const int t = std::min(c, removable.size());
  if (const auto* table = std::get_if<TabularValuation>(&valuation)) {
    const std::uint64_t rem = removable.bits();
    const Rational* best = nullptr;
    // Enumerate submasks of `removable` with exactly t elements.
    std::uint64_t sub = rem;
    while (true) {
      if (std::popcount(sub) == t) {
        const Rational& v = table->table[static_cast<size_t>((base - Bundle(sub)).bits())];
        if (best == nullptr || v < *best) best = &v;
      }
      if (sub == 0) break;
      sub = (sub - 1) & rem;
    }
    return *best;
  }
  std::vector<Rational> values;
  for (int g : removable.indices()) values.push_back(good_value(valuation, g));
  std::partial_sort(values.begin(), values.begin() + t, values.end(), std::greater<>());
  Rational out = value_of(valuation, base);
  for (int i = 0; i < t; ++i) out -= values[static_cast<size_t>(i)];
  return out;
}

template <class T>
class PartitionSearch {
 public:
  PartitionSearch(std::vector<T> values, int parts) : v_(std::move(values)), parts_(static_cast<size_t>(parts)) {
    std::sort(v_.begin(), v_.end(), std::greater<>());
    suffix_.assign(v_.size() + 1, T(0));
    for (size_t i = v_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + v_[i];
    upper_ = suffix_[0] / T(static_cast<long>(parts));
  }

  T solve() {
    if (v_.size() < parts_.size()) return T(0);
    // Greedy largest-first gives the initial lower bound.
    std::vector<T> greedy(parts_.size(), T(0));
    for (const T& x : v_) *std::min_element(greedy.begin(), greedy.end()) += x;
    best_ = *std::min_element(greedy.begin(), greedy.end());
    if (best_ < upper_) dfs(0, 0);
    return best_;
  }

 private:
  void dfs(size_t i, size_t used) {
    if (done_) return;
    if (i == v_.size()) {
      T low = *std::min_element(parts_.begin(), parts_.end());
      if (best_ < low) {
        best_ = low;
        if (!(best_ < upper_)) done_ = true;
      }
      return;
    }
    if (parts_.size() - used > v_.size() - i) return;  // some part would stay empty
    const T low = used < parts_.size() ? T(0) : *std::min_element(parts_.begin(), parts_.end());
    if (!(best_ < low + suffix_[i])) return;
    const size_t limit = std::min(used + 1, parts_.size());
    for (size_t p = 0; p < limit; ++p) {
      // Parts with equal sums are interchangeable.
      if (p < used && std::find(parts_.begin(), parts_.begin() + static_cast<std::ptrdiff_t>(p), parts_[p]) !=
                          parts_.begin() + static_cast<std::ptrdiff_t>(p)) {
        continue;
      }
      parts_[p] += v_[i];
      dfs(i + 1, p == used ? used + 1 : used);
      parts_[p] -= v_[i];
      if (done_) return;
    }
  }

  std::vector<T> v_;
  std::vector<T> parts_;
  std::vector<T> suffix_;
  T upper_{};
  T best_{};
  bool done_ = false;
};

/// Restricted-growth enumeration of partitions of `goods` into at most c
/// blocks, maximizing the least block value.
class TabularPartitionSearch {
 public:
  TabularPartitionSearch(const TabularValuation& valuation, std::vector<int> goods, int parts)
      : t_(valuation), goods_(std::move(goods)), blocks_(static_cast<size_t>(parts), 0) {}

  Rational solve() {
    dfs(0, 0);
    return best_;
  }

 private:
  void dfs(size_t i, size_t used) {
    if (i == goods_.size()) {
      const Rational* low = nullptr;
      for (size_t p = 0; p < blocks_.size(); ++p) {
        const Rational& v = t_.table[static_cast<size_t>(blocks_[p])];
        if (low == nullptr || v < *low) low = &v;
      }
      if (!found_ || best_ < *low) {
        best_ = *low;
        found_ = true;
      }
      return;
    }
    const size_t limit = std::min(used + 1, blocks_.size());
    const std::uint64_t bit = std::uint64_t{1} << goods_[i];
    for (size_t p = 0; p < limit; ++p) {
      blocks_[p] |= bit;
      dfs(i + 1, p == used ? used + 1 : used);
      blocks_[p] &= ~bit;
    }
  }

  const TabularValuation& t_;
  std::vector<int> goods_;
  std::vector<std::uint64_t> blocks_;
  Rational best_ = 0;
  bool found_ = false;
};

Rational additive_mms(const AdditiveValuation& valuation, int c, Bundle goods) {
  std::vector<Rational> values;
  for (int g : goods.indices()) values.push_back(valuation.values[static_cast<size_t>(g)]);
  BigInt lcm = 1;
  for (const auto& x : values) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
  BigInt total = 0;
  std::vector<std::int64_t> scaled;
  bool fits = true;
  for (const auto& x : values) {
    BigInt s = x.get_num() * (lcm / x.get_den());
    total += s;
    if (!s.fits_slong_p()) fits = false;
    scaled.push_back(fits ? s.get_si() : 0);
  }
  if (fits && total.fits_slong_p() && total < BigInt(std::numeric_limits<std::int64_t>::max() / 2)) {
    PartitionSearch<std::int64_t> search(std::move(scaled), c);
    Rational out(BigInt(static_cast<long>(search.solve())), lcm);
    out.canonicalize();
    return out;
  }
  PartitionSearch<Rational> search(std::move(values), c);
  return search.solve();
}

int count_in(Bundle desired, Bundle b) { return (desired & b).size(); }

bool efc_against(const Valuation& valuation, Bundle own, std::span<const Bundle> bundles, int self, int c) {
  if (const auto* bin = std::get_if<BinaryValuation>(&valuation)) {
    const int x = count_in(bin->desired, own);
    for (size_t j = 0; j < bundles.size(); ++j) {
      if (static_cast<int>(j) == self) continue;
      if (x < count_in(bin->desired, bundles[j]) - c) return false;
    }
    return true;
  }
  const Rational mine = value_of(valuation, own);
  for (size_t j = 0; j < bundles.size(); ++j) {
    if (static_cast<int>(j) == self) continue;
    if (mine < min_value_removing(valuation, bundles[j], bundles[j], c)) return false;
  }
  return true;
}

}  // namespace

std::string closest_name(std::string_view text, std::span<const std::string> candidates) {
  auto best = std::min_element(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
    return edit_distance(text, a) < edit_distance(text, b);
  });
  return best == candidates.end() ? std::string() : *best;
}

Criterion parse_criterion(std::string_view text) {
  static const std::regex ef(R"(ef-(\d+))");
  static const std::regex prop(R"(prop-(\d+))");
  static const std::regex outof(R"(1-out-of-(\d+)-mms)");
  static const std::regex best(R"(1-of-best-(\d+))");
  static const std::regex fraction(R"(fraction-mms:(.+))");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, ef)) return EnvyFreeUpTo{parse_small_int(m[1])};
  if (std::regex_match(s, m, prop)) return PropUpTo{parse_small_int(m[1])};
  if (s == "mms") return MaximinShare{};
  if (std::regex_match(s, m, outof)) return OneOutOfCMms{parse_small_int(m[1])};
  if (std::regex_match(s, m, best)) return OneOfBestC{parse_small_int(m[1])};
  if (s == "positive-mms") return PositiveMms{};
  if (std::regex_match(s, m, fraction)) {
    Rational q;
    try {
      q = parse_rational(m[1].str());
    } catch (const ParseError&) {
      throw ValidationError("invalid fraction in criterion '" + s + "'");
    }
    return FractionMms{q};
  }
  static const std::vector<std::string> examples = {"ef-1",         "prop-2",        "mms",
                                                    "1-out-of-3-mms", "1-of-best-2", "positive-mms",
                                                    "fraction-mms:1/2"};
  std::string msg = "unknown criterion '" + s + "'; accepted forms:";
  for (const auto& f : criterion_forms()) msg += " " + f;
  msg += "; did you mean '" + closest_name(s, examples) + "'?";
  throw ValidationError(msg);
}

std::vector<Criterion> parse_criteria(std::string_view text) {
  std::vector<Criterion> out;
  size_t start = 0;
  while (true) {
    size_t comma = text.find(',', start);
    out.push_back(parse_criterion(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> criterion_forms() {
  return {"ef-<c>", "prop-<c>", "mms", "1-out-of-<c>-mms", "fraction-mms:<q>", "1-of-best-<c>", "positive-mms"};
}

std::string name(const Criterion& criterion) {
  return std::visit(Overloaded{
                        [](const EnvyFreeUpTo& x) { return "ef-" + std::to_string(x.c); },
                        [](const PropUpTo& x) { return "prop-" + std::to_string(x.c); },
                        [](const MaximinShare&) { return std::string("mms"); },
                        [](const OneOutOfCMms& x) { return "1-out-of-" + std::to_string(x.c) + "-mms"; },
                        [](const FractionMms& x) { return "fraction-mms:" + to_string(x.q); },
                        [](const OneOfBestC& x) { return "1-of-best-" + std::to_string(x.c); },
                        [](const PositiveMms&) { return std::string("positive-mms"); },
                    },
                    criterion);
}

std::string describe(const Criterion& criterion) {
  return std::visit(Overloaded{
                        [](const EnvyFreeUpTo& x) { return "envy-free-except-" + std::to_string(x.c); },
                        [](const PropUpTo& x) { return "proportionality-except-" + std::to_string(x.c); },
                        [](const MaximinShare&) { return std::string("maximin-share"); },
                        [](const OneOutOfCMms& x) { return "1-out-of-" + std::to_string(x.c) + "-maximin-share"; },
                        [](const FractionMms& x) { return to_string(x.q) + "-fraction-maximin-share"; },
                        [](const OneOfBestC& x) { return "one-of-best-" + std::to_string(x.c); },
                        [](const PositiveMms&) { return std::string("positive-maximin-share"); },
                    },
                    criterion);
}

std::string short_label(const Criterion& criterion) {
  if (const auto* ef = std::get_if<EnvyFreeUpTo>(&criterion)) return "EF" + std::to_string(ef->c);
  if (const auto* prop = std::get_if<PropUpTo>(&criterion)) return "PROP-" + std::to_string(prop->c);
  return name(criterion);
}

void validate(const Criterion& criterion, int k) {
  std::visit(Overloaded{
                 [](const EnvyFreeUpTo& x) {
                   if (x.c < 0) throw ValidationError("ef-c needs c >= 0");
                 },
                 [](const PropUpTo& x) {
                   if (x.c < 0) throw ValidationError("prop-c needs c >= 0");
                 },
                 [](const MaximinShare&) {},
                 [k](const OneOutOfCMms& x) {
                   if (x.c < k) {
                     throw ValidationError("1-out-of-c-mms needs c >= k (c=" + std::to_string(x.c) +
                                           ", k=" + std::to_string(k) + ")");
                   }
                 },
                 [](const FractionMms& x) {
                   if (x.q <= 0 || x.q >= 1) throw ValidationError("fraction-mms needs 0 < q < 1");
                 },
                 [](const OneOfBestC& x) {
                   if (x.c < 1) throw ValidationError("1-of-best-c needs c >= 1");
                 },
                 [](const PositiveMms&) {},
             },
             criterion);
}

Rational value_without_best(const Valuation& valuation, Bundle bundle, int c) {
  return min_value_removing(valuation, bundle, bundle, c);
}

bool is_efc(const Valuation& valuation, Bundle own, std::span<const Bundle> others, int c) {
  return efc_against(valuation, own, others, -1, c);
}

bool is_propc(const Valuation& valuation, Bundle own, Bundle all_goods, int k, int c) {
  const Bundle rest = all_goods - own;
  if (const auto* bin = std::get_if<BinaryValuation>(&valuation)) {
    const int x = count_in(bin->desired, own);
    const int outside = count_in(bin->desired, rest);
    return k * x >= x + outside - std::min(c, outside);
  }
  return value_of(valuation, own) * k >= min_value_removing(valuation, all_goods, rest, c);
}

bool is_efc(const Agent& agent, const Allocation& alloc, int c) {
  const auto bundles = bundles_of(alloc);
  return efc_against(agent.valuation, bundles.at(static_cast<size_t>(agent.group)), bundles, agent.group, c);
}

bool is_propc(const Agent& agent, const Allocation& alloc, int c) {
  const auto bundles = bundles_of(alloc);
  return is_propc(agent.valuation, bundles.at(static_cast<size_t>(agent.group)), Bundle::all(alloc.m()), alloc.k(),
                  c);
}

Rational mms_share(const Valuation& valuation, int c, Bundle goods, int cap) {
  if (c < 1) throw ValidationError("maximin share needs at least one part");
  if (const auto* bin = std::get_if<BinaryValuation>(&valuation)) return Rational(count_in(bin->desired, goods) / c);
  if (c == 1) return value_of(valuation, goods);
  if (goods.size() > cap) {
    throw CapExceeded("maximin share over " + std::to_string(goods.size()) + " goods exceeds the exhaustive cap of " +
                      std::to_string(cap));
  }
  if (const auto* add = std::get_if<AdditiveValuation>(&valuation)) return additive_mms(*add, c, goods);
  TabularPartitionSearch search(std::get<TabularValuation>(valuation), goods.indices(), c);
  return search.solve();
}

Rational cth_best_value(const Valuation& valuation, Bundle goods, int c) {
  if (c < 1 || goods.size() < c) return 0;
  std::vector<Rational> values;
  for (int g : goods.indices()) values.push_back(good_value(valuation, g));
  std::nth_element(values.begin(), values.begin() + (c - 1), values.end(), std::greater<>());
  return values[static_cast<size_t>(c - 1)];
}

bool check(const Agent& agent, const Instance& instance, const Allocation& alloc, const Criterion& criterion) {
  const auto bundles = bundles_of(alloc);
  const Bundle own = bundles.at(static_cast<size_t>(agent.group));
  const Bundle all = instance.all_goods();
  const int k = instance.k();
  return std::visit(
      Overloaded{
          [&](const EnvyFreeUpTo& x) { return efc_against(agent.valuation, own, bundles, agent.group, x.c); },
          [&](const PropUpTo& x) { return is_propc(agent.valuation, own, all, k, x.c); },
          [&](const MaximinShare&) { return value_of(agent, own) >= mms_share(agent.valuation, k, all); },
          [&](const OneOutOfCMms& x) { return value_of(agent, own) >= mms_share(agent.valuation, x.c, all); },
          [&](const FractionMms& x) { return value_of(agent, own) >= x.q * mms_share(agent.valuation, k, all); },
          [&](const OneOfBestC& x) { return value_of(agent, own) >= cth_best_value(agent.valuation, all, x.c); },
          [&](const PositiveMms&) { return mms_share(agent.valuation, k, all) == 0 || value_of(agent, own) > 0; },
      },
      criterion);
}

int s_threshold(const Criterion& criterion, int r, int k) {
  auto need_two = [k](const char* what) {
    if (k != 2) {
      throw ValidationError(std::string(what) + " has a binary threshold only for two groups (k=" + std::to_string(k) +
                            ")");
    }
  };
  const int s = std::visit(Overloaded{
                               [&](const EnvyFreeUpTo& x) {
                                 need_two("ef-c");
                                 return r - x.c + 1 <= 0 ? 0 : (r - x.c + 1) / 2;
                               },
                               [&](const PropUpTo& x) {
                                 need_two("prop-c");
                                 return r - x.c + 1 <= 0 ? 0 : (r - x.c + 1) / 2;
                               },
                               [&](const MaximinShare&) {
                                 need_two("mms");
                                 return r / 2;
                               },
                               [&](const OneOutOfCMms& x) { return r / x.c; },
                               [&](const FractionMms&) -> int {
                                 throw ValidationError("fraction-mms has no binary threshold in this framework");
                               },
                               [&](const OneOfBestC& x) { return r >= x.c ? 1 : 0; },
                               [&](const PositiveMms&) { return r >= k ? 1 : 0; },
                           },
                           criterion);
  return std::max(s, 0);
}

CriterionEvaluator::CriterionEvaluator(const Instance& instance, std::vector<Criterion> criteria, int mms_cap)
    : instance_(&instance), criteria_(std::move(criteria)) {
  const int k = instance.k();
  if (criteria_.size() != 1 && criteria_.size() != static_cast<size_t>(k)) {
    throw ValidationError("expected 1 or " + std::to_string(k) + " criteria, got " + std::to_string(criteria_.size()));
  }
  for (const auto& c : criteria_) validate(c, k);
  const Bundle all = instance.all_goods();
  cache_.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    const Criterion& crit = criterion_for(i);
    for (const auto& agent : instance.group(i)) {
      AgentCache entry;
      if (const auto* bin = std::get_if<BinaryValuation>(&agent.valuation)) {
        entry.binary = true;
        entry.desired = bin->desired;
      }
      std::optional<Rational> threshold;
      if (std::holds_alternative<MaximinShare>(crit)) {
        threshold = mms_share(agent.valuation, k, all, mms_cap);
      } else if (const auto* o = std::get_if<OneOutOfCMms>(&crit)) {
        threshold = mms_share(agent.valuation, o->c, all, mms_cap);
      } else if (const auto* f = std::get_if<FractionMms>(&crit)) {
        threshold = f->q * mms_share(agent.valuation, k, all, mms_cap);
      } else if (const auto* b = std::get_if<OneOfBestC>(&crit)) {
        threshold = cth_best_value(agent.valuation, all, b->c);
      } else if (std::holds_alternative<PositiveMms>(crit)) {
        entry.positive_mms = mms_share(agent.valuation, k, all, mms_cap) > 0;
      }
      if (threshold && entry.binary) {
        mpz_class ceil;
        mpz_cdiv_q(ceil.get_mpz_t(), threshold->get_num_mpz_t(), threshold->get_den_mpz_t());
        entry.threshold_count = static_cast<int>(ceil.get_si());
      }
      entry.threshold = std::move(threshold);
      cache_[static_cast<size_t>(i)].push_back(std::move(entry));
    }
  }
}

const Criterion& CriterionEvaluator::criterion_for(int group) const {
  return criteria_.size() == 1 ? criteria_.front() : criteria_.at(static_cast<size_t>(group));
}

bool CriterionEvaluator::satisfied(int group, int member, std::span<const Bundle> bundles) const {
  const Agent& agent = instance_->group(group)[static_cast<size_t>(member)];
  const AgentCache& entry = cache_[static_cast<size_t>(group)][static_cast<size_t>(member)];
  const Bundle own = bundles[static_cast<size_t>(group)];
  const Criterion& crit = criterion_for(group);
  if (const auto* ef = std::get_if<EnvyFreeUpTo>(&crit)) return efc_against(agent.valuation, own, bundles, group, ef->c);
  if (const auto* prop = std::get_if<PropUpTo>(&crit)) {
    return is_propc(agent.valuation, own, instance_->all_goods(), instance_->k(), prop->c);
  }
  if (std::holds_alternative<PositiveMms>(crit)) {
    if (!entry.positive_mms) return true;
    return entry.binary ? count_in(entry.desired, own) > 0 : value_of(agent.valuation, own) > 0;
  }
  if (entry.binary) return count_in(entry.desired, own) >= entry.threshold_count;
  return value_of(agent.valuation, own) >= *entry.threshold;
}

int CriterionEvaluator::happy_count(int group, std::span<const Bundle> bundles) const {
  int n = 0;
  for (int j = 0; j < instance_->group_size(group); ++j) n += satisfied(group, j, bundles) ? 1 : 0;
  return n;
}

FairnessReport CriterionEvaluator::report(const Allocation& alloc) const {
  const int k = instance_->k();
  if (alloc.k() != k || alloc.m() != instance_->m()) {
    throw ValidationError("allocation shape (k=" + std::to_string(alloc.k()) + ", m=" + std::to_string(alloc.m()) +
                          ") does not match the instance");
  }
  const auto bundles = bundles_of(alloc);
  FairnessReport out;
  out.h = 1;
  for (int i = 0; i < k; ++i) {
    std::vector<bool> verdicts;
    int happy = 0;
    for (int j = 0; j < instance_->group_size(i); ++j) {
      const bool ok = satisfied(i, j, bundles);
      verdicts.push_back(ok);
      happy += ok ? 1 : 0;
    }
    out.verdicts.push_back(std::move(verdicts));
    out.happy.push_back(happy);
    out.sizes.push_back(instance_->group_size(i));
    out.h = std::min(out.h, ratio(happy, instance_->group_size(i)));
  }
  out.h.canonicalize();
  return out;
}

FairnessReport democratic_report(const Instance& instance, const Allocation& alloc, const Criterion& criterion) {
  return CriterionEvaluator(instance, {criterion}).report(alloc);
}

FairnessReport democratic_report(const Instance& instance, const Allocation& alloc,
                                 std::span<const Criterion> per_group) {
  return CriterionEvaluator(instance, std::vector<Criterion>(per_group.begin(), per_group.end())).report(alloc);
}

}  // namespace famfair
