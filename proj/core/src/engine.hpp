#pragma once

#include "famfair/budgets.hpp"
#include "famfair/errors.hpp"
#include "famfair/protocols.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace famfair::detail {

/// Binary allocation problem over a subset of an instance's groups and goods.
struct BinaryProblem {
  std::vector<int> groups;                   // instance group indices
  std::vector<std::vector<Bundle>> desired;  // per problem group, per member
  std::vector<std::vector<int>> need;        // initial s per member
  Bundle goods;
};

struct EngineOutcome {
  /// owner[g] = problem group receiving good g, or -1 for goods outside the problem.
  std::vector<int> owner;
  std::vector<int> ledger_happy;
  ProtocolTrace trace;
};

struct TwoGroupScheme {
  using Value = Dyadic;
  static constexpr bool kMonotoneWindows = true;
  const BudgetTable& table = default_budgets();

  Value budget(int r, int s) const { return table.B(r, s); }
  Value weight(int r, int s) const { return table.w(r, s); }
  Value own_payment(int r, int s) const { return max(table.w(r, s), table.w(r - 1, s - 1)); }
  Value refund(int r, int s) const { return table.w(r, s); }
  bool same(const Value& a, const Value& b) const { return a == b; }
  bool at_least(const Value& a, const Value& b) const { return !(a < b); }
};

struct CoinScheme {
  using Value = Dyadic;
  static constexpr bool kMonotoneWindows = false;
  const BudgetTable& table = default_budgets();

  Value budget(int r, int s) const { return table.C(r, s); }
  Value weight(int r, int s) const { return table.wC(r, s); }
  Value own_payment(int r, int s) const { return table.wC(r, s); }
  Value refund(int r, int s) const { return table.wC(r, s); }
  bool same(const Value& a, const Value& b) const { return a == b; }
  bool at_least(const Value& a, const Value& b) const { return !(a < b); }
};

struct KGroupScheme {
  using Value = double;
  static constexpr bool kMonotoneWindows = true;
  KGroupWeights weights;
  double tolerance = 1e-9;

  explicit KGroupScheme(int k) : weights(k) {}

  Value budget(int r, int s) const { return weights.B(r, s <= 0 ? 0 : s); }
  Value weight(int r, int s) const { return weights.w(r, s <= 0 ? 0 : s); }
  Value own_payment(int r, int s) const { return 1.0 - budget(r, s); }
  Value refund(int r, int s) const { return weight(r, s); }
  bool same(const Value& a, const Value& b) const { return std::abs(a - b) <= tolerance; }
  bool at_least(const Value& a, const Value& b) const { return a >= b - tolerance; }
};

/// Chooses the acting problem group for 1-based turn t.
using TurnOrder = std::function<int(int turn)>;

template <class Scheme>
EngineOutcome run_weighted_approval(const BinaryProblem& problem, const Scheme& scheme, const TurnOrder& order,
                                    int m, bool record, bool verify) {
  using Value = typename Scheme::Value;
  const size_t kp = problem.groups.size();
  std::vector<std::vector<int>> r(kp), s(kp);
  std::vector<std::vector<Value>> agent_balance(kp);
  std::vector<Value> group_balance(kp, Value(0));
  for (size_t g = 0; g < kp; ++g) {
    for (size_t j = 0; j < problem.desired[g].size(); ++j) {
      const int rj = (problem.desired[g][j] & problem.goods).size();
      const int sj = problem.need[g][j];
      r[g].push_back(rj);
      s[g].push_back(sj);
      const Value paid = scheme.budget(rj, sj);
      agent_balance[g].push_back(Value(0) - paid);
      group_balance[g] += paid;
    }
  }

  EngineOutcome out;
  out.owner.assign(static_cast<size_t>(m), -1);
  out.trace.engine_groups = problem.groups;
  out.trace.engine_desired = problem.desired;
  auto snapshot_agents = [&]() {
    std::vector<std::vector<LedgerValue>> snap(kp);
    for (size_t g = 0; g < kp; ++g) {
      for (const auto& v : agent_balance[g]) snap[g].emplace_back(v);
    }
    return snap;
  };
  auto snapshot_groups = [&]() {
    std::vector<LedgerValue> snap;
    for (const auto& v : group_balance) snap.emplace_back(v);
    return snap;
  };
  if (record) {
    out.trace.initial_group_balances = snapshot_groups();
    out.trace.initial_agent_balances = snapshot_agents();
  }

  // balance_history[t][g] = balance of g before turn t+1.
  std::vector<std::vector<Value>> balance_history;
  std::vector<int> actor_history;

  Bundle remaining = problem.goods;
  for (int turn = 1; !remaining.empty(); ++turn) {
    const int actor = order(turn);
    const auto ga = static_cast<size_t>(actor);
    if (verify) {
      balance_history.push_back(group_balance);
      actor_history.push_back(actor);
    }

    std::vector<Value> weights;
    weights.reserve(problem.desired[ga].size());
    for (size_t j = 0; j < problem.desired[ga].size(); ++j) weights.push_back(scheme.weight(r[ga][j], s[ga][j]));

    int pick = -1;
    Value best(0);
    std::vector<std::pair<int, LedgerValue>> totals;
    for (int good : remaining.indices()) {
      Value total(0);
      for (size_t j = 0; j < weights.size(); ++j) {
        if (problem.desired[ga][j].contains(good)) total += weights[j];
      }
      if (pick < 0 || best < total) {
        pick = good;
        best = total;
      }
      if (record) totals.emplace_back(good, total);
    }

    TurnRecord rec;
    if (record) {
      rec.turn = turn;
      rec.slot = actor;
      rec.remaining = remaining;
      for (size_t j = 0; j < weights.size(); ++j) {
        rec.members.push_back(MemberState{static_cast<int>(j), r[ga][j], s[ga][j], weights[j]});
      }
      rec.good_totals = std::move(totals);
      rec.pick = pick;
    }

    for (size_t g = 0; g < kp; ++g) {
      for (size_t j = 0; j < problem.desired[g].size(); ++j) {
        if (!problem.desired[g][j].contains(pick)) continue;
        if (g == ga) {
          const Value pay = scheme.own_payment(r[g][j], s[g][j]);
          agent_balance[g][j] -= pay;
          group_balance[g] += pay;
          --s[g][j];
        } else {
          const Value refund = scheme.refund(r[g][j], s[g][j]);
          agent_balance[g][j] += refund;
          group_balance[g] -= refund;
        }
        --r[g][j];
      }
    }
    remaining.erase(pick);
    out.owner[static_cast<size_t>(pick)] = actor;

    if (verify) {
      for (size_t g = 0; g < kp; ++g) {
        for (size_t j = 0; j < r[g].size(); ++j) {
          if (!scheme.same(agent_balance[g][j], Value(0) - scheme.budget(r[g][j], s[g][j]))) {
            throw InvariantViolation("turn " + std::to_string(turn) + ": member " + std::to_string(j) + " of group " +
                                     std::to_string(problem.groups[g] + 1) + " has balance " +
                                     render_value(LedgerValue(agent_balance[g][j])) + ", expected -" +
                                     render_value(LedgerValue(scheme.budget(r[g][j], s[g][j]))));
          }
        }
      }
    }
    if (record) {
      rec.group_balances = snapshot_groups();
      rec.agent_balances = snapshot_agents();
      out.trace.turns.push_back(std::move(rec));
    }
  }

  out.ledger_happy.assign(kp, 0);
  for (size_t g = 0; g < kp; ++g) {
    for (int sj : s[g]) out.ledger_happy[g] += sj <= 0 ? 1 : 0;
  }
  out.trace.ledger_happy = out.ledger_happy;

  if (verify) {
    balance_history.push_back(group_balance);
    if constexpr (Scheme::kMonotoneWindows) {
      const size_t turns = actor_history.size();
      for (size_t t = 0; t < turns; ++t) {
        const auto g = static_cast<size_t>(actor_history[t]);
        const size_t end = std::min(turns, t + kp);
        if (!scheme.at_least(balance_history[end][g], balance_history[t][g])) {
          throw InvariantViolation("group " + std::to_string(problem.groups[g] + 1) + " balance decreased over turns " +
                                   std::to_string(t + 1) + ".." + std::to_string(end));
        }
      }
    }
    for (size_t g = 0; g < kp; ++g) {
      if (!scheme.same(group_balance[g], Value(out.ledger_happy[g]))) {
        throw InvariantViolation("group " + std::to_string(problem.groups[g] + 1) + " final balance " +
                                 render_value(LedgerValue(group_balance[g])) + " differs from its " +
                                 std::to_string(out.ledger_happy[g]) + " happy members");
      }
    }
  }
  return out;
}

}  // namespace famfair::detail
