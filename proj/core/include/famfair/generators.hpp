#pragma once

#include "famfair/fairness.hpp"
#include "famfair/model.hpp"
#include "famfair/oracles.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace famfair {

/// Two groups, three goods; each member rejects a different good.
struct ThreeGoodCycle {
  int k = 2;
};
/// k groups over k*m goods; each group has one member per r-subset.
struct AllSubsets {
  int r = 2;
  int s = 1;
  int k = 2;
  int m = 2;
};
/// k groups over 2k-1 goods on a circle; members want windows of k goods.
struct Circle {
  int k = 2;
};
/// Two groups of three additive agents with values (2,1,1) rotated.
struct AdditiveThird {};
/// The all-subsets instance with r = 2l judged by EF-c.
struct EFcLimit {
  int c = 1;
  int l = 2;
};

using GeneratorSpec = std::variant<ThreeGoodCycle, AllSubsets, Circle, AdditiveThird, EFcLimit>;

/// "three-good-cycle:k=2", "all-subsets:r=2,s=1,k=2,m=3", "circle:k=3",
/// "additive-third", "efc-limit:c=1,l=2". Throws ParseError.
GeneratorSpec parse_generator(std::string_view text);
std::string name(const GeneratorSpec& spec);
std::vector<std::string> generator_forms();

/// Throws ValidationError for parameters out of range and CapExceeded when
/// a group would exceed `max_members`.
Instance generate(const GeneratorSpec& spec, long max_members = 100000);
/// Criterion under which the construction is a negative result.
Criterion matching_criterion(const GeneratorSpec& spec);
/// Finite-size upper bound on the democratic fraction.
Rational stated_bound(const GeneratorSpec& spec);

struct NegativeCheck {
  bool confirmed = false;
  Rational bound;
  OracleResult oracle;
};

/// Runs max_h on the generated instance and compares with `bound`.
NegativeCheck verify_negative(const GeneratorSpec& spec, const Criterion& criterion, const Rational& bound,
                              const OracleOptions& options = {});
NegativeCheck verify_negative(const GeneratorSpec& spec, const OracleOptions& options = {});

}  // namespace famfair
