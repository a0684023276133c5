#pragma once

#include "famfair/model.hpp"
#include "famfair/rational.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace famfair {

/// Envy-free up to c goods.
struct EnvyFreeUpTo {
  int c = 1;
  friend bool operator==(const EnvyFreeUpTo&, const EnvyFreeUpTo&) = default;
};
/// Proportional except c goods.
struct PropUpTo {
  int c = 1;
  friend bool operator==(const PropUpTo&, const PropUpTo&) = default;
};
/// 1-out-of-k maximin share.
struct MaximinShare {
  friend bool operator==(const MaximinShare&, const MaximinShare&) = default;
};
struct OneOutOfCMms {
  int c = 2;
  friend bool operator==(const OneOutOfCMms&, const OneOutOfCMms&) = default;
};
struct FractionMms {
  Rational q;
  friend bool operator==(const FractionMms&, const FractionMms&) = default;
};
/// Bundle worth at least the c-th most valuable single good.
struct OneOfBestC {
  int c = 2;
  friend bool operator==(const OneOfBestC&, const OneOfBestC&) = default;
};
struct PositiveMms {
  friend bool operator==(const PositiveMms&, const PositiveMms&) = default;
};

using Criterion = std::variant<EnvyFreeUpTo, PropUpTo, MaximinShare, OneOutOfCMms, FractionMms, OneOfBestC, PositiveMms>;

/// Parses "ef-1", "prop-2", "mms", "1-out-of-3-mms", "fraction-mms:1/2",
/// "1-of-best-2" or "positive-mms". Unknown names raise ValidationError
/// listing the accepted forms and the closest match.
Criterion parse_criterion(std::string_view text);
/// Comma-separated list of criteria.
std::vector<Criterion> parse_criteria(std::string_view text);
/// Inverse of parse_criterion.
std::string name(const Criterion& criterion);
/// Long name used in trace preambles ("1-out-of-2-maximin-share").
std::string describe(const Criterion& criterion);
/// Short label used in line-protocol traces ("EF1", "PROP-2").
std::string short_label(const Criterion& criterion);
/// Accepted criterion name forms, for help text.
std::vector<std::string> criterion_forms();
/// Candidate with the smallest edit distance to `text`.
std::string closest_name(std::string_view text, std::span<const std::string> candidates);

/// Throws ValidationError when the criterion's parameters are invalid for k groups.
void validate(const Criterion& criterion, int k);

/// Agent's value for `bundle` after removing the c goods of `bundle` it values
/// most (for tabular valuations: the minimum over removal sets of that size).
Rational value_without_best(const Valuation& valuation, Bundle bundle, int c);

bool is_efc(const Agent& agent, const Allocation& alloc, int c);
bool is_propc(const Agent& agent, const Allocation& alloc, int c);
/// Same predicates for an agent whose group receives `own` out of
/// `all_goods`, with `others` the bundles of the other groups.
bool is_efc(const Valuation& valuation, Bundle own, std::span<const Bundle> others, int c);
bool is_propc(const Valuation& valuation, Bundle own, Bundle all_goods, int k, int c);

inline constexpr int kDefaultMmsCap = 12;

/// Exact 1-out-of-c maximin share of `goods`. Binary valuations use the
/// closed form floor(r/c); others enumerate partitions and throw
/// CapExceeded when |goods| > cap.
Rational mms_share(const Valuation& valuation, int c, Bundle goods, int cap = kDefaultMmsCap);

/// Value of the c-th most valuable single good (0 if fewer than c goods).
Rational cth_best_value(const Valuation& valuation, Bundle goods, int c);

bool check(const Agent& agent, const Instance& instance, const Allocation& alloc, const Criterion& criterion);

/// Number of desired goods a binary agent with r desired goods must receive.
/// Throws ValidationError for criteria without such a characterization at k.
int s_threshold(const Criterion& criterion, int r, int k);

struct FairnessReport {
  /// verdicts[i][j]: agent j of group i is satisfied.
  std::vector<std::vector<bool>> verdicts;
  std::vector<int> happy;
  std::vector<int> sizes;
  /// min_i happy_i / n_i.
  Rational h;

  Rational fraction(int group) const { return ratio(happy.at(static_cast<size_t>(group)), sizes.at(static_cast<size_t>(group))); }
};

/// Evaluates criteria against many allocations of one instance, caching
/// allocation-independent quantities (shares and thresholds) per agent.
/// `criteria` holds either one criterion for all groups or one per group.
class CriterionEvaluator {
 public:
  CriterionEvaluator(const Instance& instance, std::vector<Criterion> criteria, int mms_cap = kDefaultMmsCap);

  const Instance& instance() const { return *instance_; }
  const Criterion& criterion_for(int group) const;

  bool satisfied(int group, int member, std::span<const Bundle> bundles) const;
  int happy_count(int group, std::span<const Bundle> bundles) const;
  FairnessReport report(const Allocation& alloc) const;

 private:
  struct AgentCache {
    std::optional<Rational> threshold;  // value the own bundle must reach
    bool positive_mms = false;
    bool binary = false;
    Bundle desired;
    int threshold_count = 0;  // binary agents: desired goods needed
  };

  const Instance* instance_;
  std::vector<Criterion> criteria_;
  std::vector<std::vector<AgentCache>> cache_;
};

FairnessReport democratic_report(const Instance& instance, const Allocation& alloc, const Criterion& criterion);
FairnessReport democratic_report(const Instance& instance, const Allocation& alloc,
                                 std::span<const Criterion> per_group);

}  // namespace famfair
