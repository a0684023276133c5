#pragma once

#include "famfair/dyadic.hpp"
#include "famfair/fairness.hpp"
#include "famfair/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace famfair {

/// Ledger amounts: exact for two-group schemes, double for k >= 3.
using LedgerValue = std::variant<Dyadic, double>;

double to_double(const LedgerValue& value);
/// "0", "2.0", "0.625" for dyadic values; shortest round-trip form for doubles.
std::string render_value(const LedgerValue& value);

struct MemberState {
  int member = 0;
  int r = 0;
  /// Desired goods still needed; negative once the member got more than needed.
  int s = 0;
  LedgerValue weight;
};

struct TurnRecord {
  int turn = 0;  // 1-based
  /// Acting group, as an index into ProtocolTrace::engine_groups.
  int slot = 0;
  Bundle remaining;  // before the pick
  std::vector<MemberState> members;
  /// Total member weight of every remaining good, in index order.
  std::vector<std::pair<int, LedgerValue>> good_totals;
  int pick = -1;
  std::vector<LedgerValue> group_balances;               // after the turn
  std::vector<std::vector<LedgerValue>> agent_balances;  // after the turn
};

struct LineCheck {
  int group = 0;
  int yes = 0;
};

struct LineStep {
  std::vector<int> left;   // current block, in line order
  std::vector<int> right;  // goods not yet allocated outside the block, in line order
  std::vector<LineCheck> checks;
  int claimant = -1;
  int remainder_group = -1;
};

struct LocalMove {
  int good = 0;
  int from = 0;
  int to = 0;
  int utility_one_before = 0;
  int utility_one_after = 0;
};

struct ProtocolTrace {
  /// Instance groups taking part in the weighted-approval run, in turn order.
  std::vector<int> engine_groups;
  /// Desired sets used by the weighted-approval run (after any truncation),
  /// indexed like engine_groups.
  std::vector<std::vector<Bundle>> engine_desired;
  std::vector<LedgerValue> initial_group_balances;
  std::vector<std::vector<LedgerValue>> initial_agent_balances;
  std::vector<TurnRecord> turns;
  /// Final group ledgers converted to happy counts, indexed like engine_groups.
  std::vector<int> ledger_happy;
  std::vector<LineStep> line_steps;
  std::vector<LocalMove> moves;
  int iterations = 0;
  std::vector<std::string> notes;
};

/// A guarantee is exact (Rational) except for k-group RWAV bounds.
using Bound = std::variant<Rational, double>;
double to_double(const Bound& bound);
std::string render_bound(const Bound& bound);

struct RunResult {
  std::string protocol;
  Allocation allocation;
  std::vector<Criterion> criteria;  // one for all groups, or one per group
  FairnessReport report;
  /// Per group: the fraction of happy members the protocol guarantees.
  std::vector<Bound> guarantee;
  /// Guarantee holds in expectation over the coin tosses only.
  bool in_expectation = false;
  /// Group that moved first (round-robin protocols), otherwise 0.
  int first_group = 0;
  std::uint64_t seed = 0;
  std::optional<ProtocolTrace> trace;
};

/// True when every group's happy fraction reaches its guarantee
/// (doubles compared with tolerance `tol`).
bool meets_guarantee(const RunResult& result, double tol = 1e-9);

struct RunOptions {
  bool record_trace = false;
  /// Check the payment-ledger invariants after every turn and throw
  /// InvariantViolation on failure.
  bool verify_ledger = true;
};

/// Round-robin weighted approval voting for two groups of binary agents.
/// `criteria` holds one criterion, or one per group.
RunResult rwav2(const Instance& instance, std::span<const Criterion> criteria, int first_group,
                const RunOptions& options = {});
/// If some group has a good desired by at least (2^c-1)/(2^c+1) of its
/// members wanting >= c goods, that group gets only that good; otherwise
/// rwav2 with 1-of-best-c.
RunResult rwav2_enhanced(const Instance& instance, int c, const RunOptions& options = {});
/// Local search for two identical groups, 1-of-best-2.
RunResult identical_local_search(const Instance& instance, const RunOptions& options = {});
/// Two-group line protocol: EF-c left block for at least half of a group.
RunResult line2(const Instance& instance, int c = 1, const RunOptions& options = {});
/// k-group line protocol with PROP-c claims (c < 0 means k-1).
RunResult linek(const Instance& instance, int c = -1, const RunOptions& options = {});
/// k-group weighted approval voting for 1-of-best-c.
RunResult rwavk(const Instance& instance, int c, const RunOptions& options = {});
/// 1-of-best-k for k groups of additive agents.
RunResult best_k_protocol(const Instance& instance, const RunOptions& options = {});
/// Coin-toss weighted approval voting for two groups of binary agents.
RunResult cwav2(const Instance& instance, std::span<const Criterion> criteria, std::uint64_t seed,
                const RunOptions& options = {});

/// Names accepted by run_protocol.
std::vector<std::string> protocol_names();

}  // namespace famfair
