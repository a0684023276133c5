#include "famfair/protocols.hpp"

#include "engine.hpp"
#include "famfair/budgets.hpp"
#include "famfair/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

namespace famfair {

using detail::BinaryProblem;
using detail::EngineOutcome;

double to_double(const LedgerValue& value) {
  if (const auto* d = std::get_if<Dyadic>(&value)) return d->to_double();
  return std::get<double>(value);
}

std::string render_value(const LedgerValue& value) {
  if (const auto* d = std::get_if<Dyadic>(&value)) return d->to_trace_string();
  const double x = std::get<double>(value);
  if (x == 0.0) return "0";
  return fmt::format("{}", x);
}

double to_double(const Bound& bound) {
  if (const auto* q = std::get_if<Rational>(&bound)) return q->get_d();
  return std::get<double>(bound);
}

std::string render_bound(const Bound& bound) {
  if (const auto* q = std::get_if<Rational>(&bound)) return to_string(*q);
  return fmt::format("{}", std::get<double>(bound));
}

bool meets_guarantee(const RunResult& result, double tol) {
  for (size_t i = 0; i < result.guarantee.size(); ++i) {
    const int happy = result.report.happy.at(i);
    const int n = result.report.sizes.at(i);
    if (const auto* q = std::get_if<Rational>(&result.guarantee[i])) {
      if (ratio(happy, n) < *q) return false;
    } else if (static_cast<double>(happy) / n < std::get<double>(result.guarantee[i]) - tol) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> protocol_names() {
  return {"rwav2", "rwav2-enhanced", "identical-local-search", "line2", "linek", "rwavk", "best-k", "cwav2"};
}

namespace {

void require_groups(const Instance& instance, int k, const char* protocol) {
  if (instance.k() != k) {
    throw ValidationError(std::string(protocol) + " needs exactly " + std::to_string(k) + " groups, got " +
                          std::to_string(instance.k()));
  }
}

void require_binary(const Instance& instance, const char* protocol) {
  for (int i = 0; i < instance.k(); ++i) {
    for (const auto& agent : instance.group(i)) {
      if (!std::holds_alternative<BinaryValuation>(agent.valuation)) {
        throw ValidationError(std::string(protocol) + " needs binary agents; agent '" + agent.id + "' of group " +
                              std::to_string(i + 1) + " is not binary (use --binarize)");
      }
    }
  }
}

Bundle desired_of(const Agent& agent) { return std::get<BinaryValuation>(agent.valuation).desired; }

/// The `c` lowest-index goods of `desired` within `goods`.
Bundle truncate(Bundle desired, Bundle goods, int c) {
  Bundle out;
  for (int g : (desired & goods).indices()) {
    if (out.size() == c) break;
    out.insert(g);
  }
  return out;
}

Allocation allocation_from(const std::vector<int>& owner, const std::vector<int>& slot_group, int k) {
  std::vector<int> assignment(owner.size());
  for (size_t g = 0; g < owner.size(); ++g) {
    if (owner[g] < 0) throw InvariantViolation("good " + std::to_string(g) + " left unallocated");
    assignment[g] = slot_group.empty() ? owner[g] : slot_group[static_cast<size_t>(owner[g])];
  }
  return Allocation(std::move(assignment), k);
}

const Criterion& criterion_for(std::span<const Criterion> criteria, int group) {
  return criteria.size() == 1 ? criteria.front() : criteria[static_cast<size_t>(group)];
}

std::vector<Criterion> checked_criteria(std::span<const Criterion> criteria, int k) {
  if (criteria.size() != 1 && criteria.size() != static_cast<size_t>(k)) {
    throw ValidationError("expected 1 or " + std::to_string(k) + " criteria, got " + std::to_string(criteria.size()));
  }
  for (const auto& c : criteria) validate(c, k);
  return {criteria.begin(), criteria.end()};
}

/// Problem over the listed groups and goods with need computed from each
/// member's desired count inside `goods`.
template <class Need>
BinaryProblem make_problem(const Instance& instance, std::vector<int> groups, Bundle goods, int truncate_to,
                           Need need) {
  BinaryProblem p;
  p.goods = goods;
  for (int g : groups) {
    std::vector<Bundle> desired;
    std::vector<int> needs;
    for (const auto& agent : instance.group(g)) {
      const Bundle full = desired_of(agent) & goods;
      desired.push_back(truncate_to > 0 ? truncate(full, goods, truncate_to) : full);
      needs.push_back(need(g, full.size()));
    }
    p.desired.push_back(std::move(desired));
    p.need.push_back(std::move(needs));
  }
  p.groups = std::move(groups);
  return p;
}

EngineOutcome run_round_robin_two(const BinaryProblem& p, int m, const RunOptions& options) {
  return detail::run_weighted_approval(
      p, detail::TwoGroupScheme{}, [](int turn) { return (turn - 1) % 2; }, m, options.record_trace,
      options.verify_ledger);
}

/// Enhanced RWAV on a two-group problem; fills `owner` by problem slot.
/// Returns the engine outcome when the weighted-approval fallback ran.
std::optional<EngineOutcome> enhanced_core(const Instance& instance, const BinaryProblem& p, int c, int m,
                                           const RunOptions& options, std::vector<int>& owner,
                                           std::vector<std::string>& notes) {
  const long big = (1L << c);
  for (size_t slot = 0; slot < 2; ++slot) {
    int counted = 0;
    for (const auto& d : p.desired[slot]) counted += d.size() >= c ? 1 : 0;
    if (counted == 0) continue;
    for (int good : p.goods.indices()) {
      int count = 0;
      for (const auto& d : p.desired[slot]) count += (d.size() >= c && d.contains(good)) ? 1 : 0;
      if (static_cast<long>(count) * (big + 1) >= static_cast<long>(counted) * (big - 1)) {
        for (int g : p.goods.indices()) owner[static_cast<size_t>(g)] = static_cast<int>(1 - slot);
        owner[static_cast<size_t>(good)] = static_cast<int>(slot);
        notes.push_back(fmt::format("Group {}: {}/{} members want {}; it gets {} and group {} gets all other goods",
                                    p.groups[slot] + 1, count, counted, instance.label(good), instance.label(good),
                                    p.groups[1 - slot] + 1));
        return std::nullopt;
      }
    }
  }
  EngineOutcome out = run_round_robin_two(p, m, options);
  for (int g : p.goods.indices()) owner[static_cast<size_t>(g)] = out.owner[static_cast<size_t>(g)];
  return out;
}

RunResult finish(std::string protocol, const Instance& instance, Allocation alloc, std::vector<Criterion> criteria,
                 std::vector<Bound> guarantee, std::optional<ProtocolTrace> trace) {
  FairnessReport report = democratic_report(instance, alloc, criteria);
  return RunResult{std::move(protocol), std::move(alloc), std::move(criteria), std::move(report), std::move(guarantee),
                   false, 0, 0, std::move(trace)};
}

Rational rational_of(const Dyadic& d) { return d.to_rational(); }

}  // namespace

RunResult rwav2(const Instance& instance, std::span<const Criterion> criteria, int first_group,
                const RunOptions& options) {
  require_groups(instance, 2, "rwav2");
  require_binary(instance, "rwav2");
  auto crits = checked_criteria(criteria, 2);
  if (first_group != 0 && first_group != 1) throw ValidationError("first group must be 1 or 2");
  const int second = 1 - first_group;
  BinaryProblem p = make_problem(instance, {first_group, second}, instance.all_goods(), 0, [&](int g, int r) {
    return s_threshold(criterion_for(crits, g), r, 2);
  });
  EngineOutcome out = run_round_robin_two(p, instance.m(), options);

  std::vector<Bound> guarantee(2);
  for (size_t slot = 0; slot < 2; ++slot) {
    std::optional<Dyadic> low;
    for (size_t j = 0; j < p.desired[slot].size(); ++j) {
      const int r = p.desired[slot][j].size();
      const Dyadic b = B(slot == 0 ? r : r - 1, p.need[slot][j]);
      if (!low || b < *low) low = b;
    }
    guarantee[static_cast<size_t>(p.groups[slot])] = rational_of(*low);
  }
  std::optional<ProtocolTrace> trace;
  if (options.record_trace) trace = std::move(out.trace);
  RunResult result = finish("rwav2", instance, allocation_from(out.owner, p.groups, 2), std::move(crits),
                            std::move(guarantee), std::move(trace));
  result.first_group = first_group;
  return result;
}

RunResult rwav2_enhanced(const Instance& instance, int c, const RunOptions& options) {
  require_groups(instance, 2, "rwav2-enhanced");
  require_binary(instance, "rwav2-enhanced");
  if (c < 1 || c > 30) throw ValidationError("rwav2-enhanced needs 1 <= c <= 30");
  BinaryProblem p =
      make_problem(instance, {0, 1}, instance.all_goods(), 0, [c](int, int r) { return r >= c ? 1 : 0; });
  std::vector<int> owner(static_cast<size_t>(instance.m()), -1);
  std::vector<std::string> notes;
  auto engine = enhanced_core(instance, p, c, instance.m(), options, owner, notes);

  const Rational bound((1L << c) - 1, (1L << c) + 1);
  std::optional<ProtocolTrace> trace;
  if (options.record_trace) {
    trace = engine ? std::move(engine->trace) : ProtocolTrace{};
    trace->notes = std::move(notes);
  }
  return finish("rwav2-enhanced", instance, allocation_from(owner, p.groups, 2), {OneOfBestC{c}}, {bound, bound},
                std::move(trace));
}

RunResult identical_local_search(const Instance& instance, const RunOptions& options) {
  require_groups(instance, 2, "identical-local-search");
  require_binary(instance, "identical-local-search");
  std::vector<std::vector<std::uint64_t>> sets(2);
  for (int i = 0; i < 2; ++i) {
    for (const auto& agent : instance.group(i)) sets[static_cast<size_t>(i)].push_back(desired_of(agent).bits());
    std::sort(sets[static_cast<size_t>(i)].begin(), sets[static_cast<size_t>(i)].end());
  }
  if (sets[0] != sets[1]) throw ValidationError("identical-local-search needs two groups with identical members");

  // Each counted agent keeps its two lowest-index desired goods.
  std::vector<std::vector<Bundle>> wants(2);
  for (int i = 0; i < 2; ++i) {
    for (const auto& agent : instance.group(i)) {
      const Bundle d = desired_of(agent);
      if (d.size() >= 2) wants[static_cast<size_t>(i)].push_back(truncate(d, instance.all_goods(), 2));
    }
  }

  const int m = instance.m();
  std::vector<int> owner(static_cast<size_t>(m), 1);
  auto bundle_of = [&](int group) {
    Bundle b;
    for (int g = 0; g < m; ++g) {
      if (owner[static_cast<size_t>(g)] == group) b.insert(g);
    }
    return b;
  };
  auto utility_one = [&]() {
    int n = 0;
    for (int i = 0; i < 2; ++i) {
      const Bundle own = bundle_of(i);
      for (const auto& d : wants[static_cast<size_t>(i)]) n += (d & own).size() == 1 ? 1 : 0;
    }
    return n;
  };
  // Members of `group` wanting `good` whose utility equals `y`.
  auto count = [&](int group, int good, int y) {
    const Bundle own = bundle_of(group);
    int n = 0;
    for (const auto& d : wants[static_cast<size_t>(group)]) n += (d.contains(good) && (d & own).size() == y) ? 1 : 0;
    return n;
  };

  ProtocolTrace trace;
  const int limit = (instance.group_size(0) + instance.group_size(1)) / 2;
  int iterations = 0;
  while (true) {
    bool moved = false;
    for (int g = 0; g < m && !moved; ++g) {
      const int from = owner[static_cast<size_t>(g)];
      const int to = 1 - from;
      // Moving out of group `from` pays off when more members of `to` have
      // utility 0 than members of `from` have utility exactly 1.
      if (count(to, g, 0) > count(from, g, 1)) {
        const int before = utility_one();
        owner[static_cast<size_t>(g)] = to;
        const int after = utility_one();
        ++iterations;
        if (options.verify_ledger && after < before + 2) {
          throw InvariantViolation("local search move of good " + instance.label(g) +
                                   " raised the utility-1 count by less than 2");
        }
        if (options.record_trace) trace.moves.push_back(LocalMove{g, from, to, before, after});
        moved = true;
      }
    }
    if (!moved) break;
    if (iterations > limit) throw InvariantViolation("local search exceeded (n1+n2)/2 iterations");
  }
  trace.iterations = iterations;

  const Rational bound(2, 3);
  std::optional<ProtocolTrace> out_trace;
  if (options.record_trace) out_trace = std::move(trace);
  RunResult result = finish("identical-local-search", instance, Allocation(owner, 2), {OneOfBestC{2}}, {bound, bound},
                            std::move(out_trace));
  if (!result.trace) {
    // Iteration count is reported even without a full trace.
    result.trace = ProtocolTrace{};
    result.trace->iterations = iterations;
  }
  return result;
}

RunResult line2(const Instance& instance, int c, const RunOptions& options) {
  require_groups(instance, 2, "line2");
  if (c < 0) throw ValidationError("line2 needs c >= 0");
  const auto& order = instance.good_order();
  const int m = instance.m();
  const Bundle all = instance.all_goods();
  ProtocolTrace trace;
  std::vector<int> owner(static_cast<size_t>(m), -1);
  for (int t = 0; t <= m; ++t) {
    Bundle left;
    LineStep step;
    for (int i = 0; i < m; ++i) {
      const int g = order[static_cast<size_t>(i)];
      if (i < t) {
        left.insert(g);
        step.left.push_back(g);
      } else {
        step.right.push_back(g);
      }
    }
    const Bundle right = all - left;
    const std::array<Bundle, 1> other{right};
    int claimant = -1;
    for (int grp = 0; grp < 2 && claimant < 0; ++grp) {
      int yes = 0;
      for (const auto& agent : instance.group(grp)) yes += is_efc(agent.valuation, left, other, c) ? 1 : 0;
      step.checks.push_back(LineCheck{grp, yes});
      if (2 * yes >= instance.group_size(grp)) claimant = grp;
    }
    if (claimant >= 0) {
      step.claimant = claimant;
      step.remainder_group = 1 - claimant;
      for (int g = 0; g < m; ++g) owner[static_cast<size_t>(g)] = left.contains(g) ? claimant : 1 - claimant;
    }
    trace.line_steps.push_back(std::move(step));
    if (claimant >= 0) break;
  }
  const Rational half(1, 2);
  std::optional<ProtocolTrace> out_trace;
  if (options.record_trace) out_trace = std::move(trace);
  return finish("line2", instance, Allocation(owner, 2), {EnvyFreeUpTo{c}}, {half, half}, std::move(out_trace));
}

RunResult linek(const Instance& instance, int c, const RunOptions& options) {
  const int k = instance.k();
  if (c < 0) c = k - 1;
  const int m = instance.m();
  const Bundle all = instance.all_goods();
  std::vector<int> line = instance.good_order();
  std::vector<int> active(static_cast<size_t>(k));
  std::iota(active.begin(), active.end(), 0);
  std::vector<int> owner(static_cast<size_t>(m), -1);
  ProtocolTrace trace;

  while (active.size() > 1) {
    bool claimed = false;
    for (size_t t = 0; t <= line.size() && !claimed; ++t) {
      LineStep step;
      Bundle left;
      for (size_t i = 0; i < line.size(); ++i) {
        if (i < t) {
          left.insert(line[i]);
          step.left.push_back(line[i]);
        } else {
          step.right.push_back(line[i]);
        }
      }
      for (int grp : active) {
        int yes = 0;
        for (const auto& agent : instance.group(grp)) yes += is_propc(agent.valuation, left, all, k, c) ? 1 : 0;
        step.checks.push_back(LineCheck{grp, yes});
        if (k * yes >= instance.group_size(grp)) {
          step.claimant = grp;
          break;
        }
      }
      if (step.claimant >= 0) {
        claimed = true;
        for (int g : step.left) owner[static_cast<size_t>(g)] = step.claimant;
        line.erase(line.begin(), line.begin() + static_cast<std::ptrdiff_t>(t));
        active.erase(std::find(active.begin(), active.end(), step.claimant));
        if (active.size() == 1) {
          step.remainder_group = active.front();
          for (int g : line) owner[static_cast<size_t>(g)] = active.front();
          line.clear();
        }
      }
      trace.line_steps.push_back(std::move(step));
    }
    if (!claimed) {
      // No group accepted even the whole remaining line.
      const int taker = active.front();
      trace.notes.push_back(fmt::format("No group claimed the remaining goods; group {} takes them", taker + 1));
      for (int g : line) owner[static_cast<size_t>(g)] = taker;
      line.clear();
      active.clear();
    }
  }
  if (active.size() == 1) {
    for (int g : line) owner[static_cast<size_t>(g)] = active.front();
  }
  std::vector<Bound> guarantee(static_cast<size_t>(k), Rational(1, k));
  std::optional<ProtocolTrace> out_trace;
  if (options.record_trace) out_trace = std::move(trace);
  return finish("linek", instance, Allocation(owner, k), {PropUpTo{c}}, std::move(guarantee), std::move(out_trace));
}

RunResult rwavk(const Instance& instance, int c, const RunOptions& options) {
  require_binary(instance, "rwavk");
  const int k = instance.k();
  if (c < 1) throw ValidationError("rwavk needs c >= 1");
  std::vector<int> groups(static_cast<size_t>(k));
  std::iota(groups.begin(), groups.end(), 0);
  BinaryProblem p = make_problem(instance, groups, instance.all_goods(), c, [c](int, int r) { return r >= c ? 1 : 0; });
  EngineOutcome out = detail::run_weighted_approval(
      p, detail::KGroupScheme(k), [k](int turn) { return (turn - 1) % k; }, instance.m(), options.record_trace,
      options.verify_ledger);

  const KGroupWeights weights(k);
  std::vector<Bound> guarantee;
  for (int i = 0; i < k; ++i) guarantee.emplace_back(std::max(0.0, weights.B(c - i, 1)));
  std::optional<ProtocolTrace> trace;
  if (options.record_trace) {
    trace = std::move(out.trace);
    if (c < k) trace->notes.push_back(fmt::format("c={} < k={}: later groups have no guarantee", c, k));
  }
  return finish("rwavk", instance, allocation_from(out.owner, p.groups, k), {OneOfBestC{c}}, std::move(guarantee),
                std::move(trace));
}

RunResult best_k_protocol(const Instance& instance, const RunOptions& options) {
  const int k = instance.k();
  const Instance binary = binarize(instance, k);
  const int m = instance.m();
  std::vector<int> active(static_cast<size_t>(k));
  std::iota(active.begin(), active.end(), 0);
  Bundle avail = instance.all_goods();
  std::vector<int> owner(static_cast<size_t>(m), -1);
  ProtocolTrace trace;
  std::optional<EngineOutcome> engine;

  while (active.size() > 2) {
    bool found = false;
    for (size_t a = 0; a < active.size() && !found; ++a) {
      const int grp = active[a];
      for (int good : avail.indices()) {
        int count = 0;
        for (const auto& agent : binary.group(grp)) count += desired_of(agent).contains(good) ? 1 : 0;
        if (3 * count >= binary.group_size(grp)) {
          owner[static_cast<size_t>(good)] = grp;
          avail.erase(good);
          trace.notes.push_back(fmt::format("Group {}: {}/{} members want {}; it gets {}", grp + 1, count,
                                            binary.group_size(grp), instance.label(good), instance.label(good)));
          active.erase(active.begin() + static_cast<std::ptrdiff_t>(a));
          found = true;
          break;
        }
      }
    }
    if (!found) {
      const int kk = static_cast<int>(active.size());
      BinaryProblem p = make_problem(binary, active, avail, kk, [kk](int, int r) { return r >= kk ? 1 : 0; });
      engine = detail::run_weighted_approval(
          p, detail::KGroupScheme(kk), [kk](int turn) { return (turn - 1) % kk; }, m, options.record_trace,
          options.verify_ledger);
      for (int g : avail.indices()) owner[static_cast<size_t>(g)] = p.groups[static_cast<size_t>(engine->owner[static_cast<size_t>(g)])];
      avail = Bundle();
      active.clear();
    }
  }
  if (active.size() == 2) {
    BinaryProblem p = make_problem(binary, active, avail, 0, [](int, int r) { return r >= 2 ? 1 : 0; });
    std::vector<int> slot_owner(static_cast<size_t>(m), -1);
    engine = enhanced_core(binary, p, 2, m, options, slot_owner, trace.notes);
    for (int g : avail.indices()) owner[static_cast<size_t>(g)] = p.groups[static_cast<size_t>(slot_owner[static_cast<size_t>(g)])];
  }

  const Rational bound = k == 2 ? Rational(3, 5) : Rational(1, 3);
  std::optional<ProtocolTrace> out_trace;
  if (options.record_trace) {
    std::vector<std::string> notes = std::move(trace.notes);
    if (engine) trace = std::move(engine->trace);
    trace.notes = std::move(notes);
    out_trace = std::move(trace);
  }
  return finish("best-k", instance, Allocation(owner, k), {OneOfBestC{k}},
                std::vector<Bound>(static_cast<size_t>(k), bound), std::move(out_trace));
}

RunResult cwav2(const Instance& instance, std::span<const Criterion> criteria, std::uint64_t seed,
                const RunOptions& options) {
  require_groups(instance, 2, "cwav2");
  require_binary(instance, "cwav2");
  auto crits = checked_criteria(criteria, 2);
  BinaryProblem p = make_problem(instance, {0, 1}, instance.all_goods(), 0, [&](int g, int r) {
    return s_threshold(criterion_for(crits, g), r, 2);
  });
  std::mt19937_64 rng(seed);
  EngineOutcome out = detail::run_weighted_approval(
      p, detail::CoinScheme{}, [&rng](int) { return static_cast<int>(rng() >> 63); }, instance.m(),
      options.record_trace, options.verify_ledger);

  std::vector<Bound> guarantee;
  for (size_t slot = 0; slot < 2; ++slot) {
    std::optional<Dyadic> low;
    for (size_t j = 0; j < p.desired[slot].size(); ++j) {
      const Dyadic b = C(p.desired[slot][j].size(), p.need[slot][j]);
      if (!low || b < *low) low = b;
    }
    guarantee.emplace_back(rational_of(*low));
  }
  std::optional<ProtocolTrace> trace;
  if (options.record_trace) trace = std::move(out.trace);
  RunResult result = finish("cwav2", instance, allocation_from(out.owner, p.groups, 2), std::move(crits),
                            std::move(guarantee), std::move(trace));
  result.in_expectation = true;
  result.seed = seed;
  return result;
}

}  // namespace famfair
