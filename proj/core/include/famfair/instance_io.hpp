#pragma once

#include "famfair/fairness.hpp"
#include "famfair/model.hpp"
#include "famfair/oracles.hpp"
#include "famfair/protocols.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace famfair {

/// Parses the JSON instance document:
///   {"goods": [...], "groups": [[agent, ...], ...], "order": [...]}
/// Agents are {"type": "binary", "desired": [labels]},
/// {"type": "additive", "values": [numbers]} or
/// {"type": "tabular", "values": {"": 0, "v": 1, "v,w": 2, ...}}, with
/// optional "count" and "id". Numbers may be integers, decimals or "p/q"
/// strings. Throws ParseError.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

/// One entry per agent; parse_instance(serialize_instance(I)) == I.
std::string serialize_instance(const Instance& instance);

/// {"bundles": [[labels], ...]}; every good must appear exactly once.
Allocation parse_allocation(std::string_view text, const Instance& instance);
Allocation load_allocation(const std::string& path, const Instance& instance);

/// {"bundles": ..., "happy": [[h, n], ...], "h": "p/q", "verdicts": ...}.
std::string serialize_allocation(const Instance& instance, const Allocation& allocation,
                                 const FairnessReport& report);

std::string serialize_run(const Instance& instance, const RunResult& result);
/// `bound`, when given, is reported with whether best_h stays within it.
std::string serialize_oracle(const Instance& instance, const OracleResult& result,
                             const std::optional<Rational>& bound = std::nullopt);
std::string serialize_exists(const Instance& instance, const ExistsResult& result, const Rational& h);

/// Reads a whole file; throws ValidationError when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace famfair
