#include "support.hpp"

#include "famfair/budgets.hpp"
#include "famfair/errors.hpp"
#include "famfair/generators.hpp"
#include "famfair/oracles.hpp"

#include <doctest.h>

using namespace famfair;
using namespace famfair::testing;

namespace {

struct Naive {
  Rational best = -1;
  std::vector<int> witness;
  std::optional<std::vector<int>> first_reaching;
};

// Lexicographic enumeration of assignment vectors.
Naive naive_search(const Instance& inst, const Criterion& crit, const Rational& h) {
  Naive out;
  const int k = inst.k();
  const int m = inst.m();
  std::vector<int> a(static_cast<size_t>(m), 0);
  while (true) {
    const Rational got = democratic_report(inst, Allocation(a, k), crit).h;
    if (got > out.best) {
      out.best = got;
      out.witness = a;
    }
    if (!out.first_reaching && got >= h) out.first_reaching = a;
    int g = m - 1;
    while (g >= 0 && ++a[static_cast<size_t>(g)] == k) a[static_cast<size_t>(g--)] = 0;
    if (g < 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("max_h and exists_h agree with naive enumeration") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 80; ++t) {
    const int k = uniform(rng, 2, 3);
    const int m = uniform(rng, 1, k == 2 ? 8 : 5);
    const Instance inst = t % 3 == 0   ? random_binary(rng, k, m, 4)
                          : t % 3 == 1 ? random_additive(rng, k, m, 4, 5)
                                       : random_tabular(rng, k, m, 3);
    const Criterion crit = t % 2 ? Criterion{EnvyFreeUpTo{1}} : Criterion{MaximinShare{}};
    const Rational h = ratio(uniform(rng, 1, 4), 4);
    const Naive naive = naive_search(inst, crit, h);

    OracleOptions opts;
    opts.threads = 1 + t % 3;
    const OracleResult best = max_h(inst, crit, opts);
    CHECK(best.best_h == naive.best);
    CHECK(best.witness.assignment() == naive.witness);
    CHECK(best.allocations_examined == *allocation_count(k, m, opts.cap));

    const ExistsResult found = exists_h(inst, crit, h, opts);
    CHECK(found.found == naive.first_reaching.has_value());
    if (found.found) CHECK(found.witness->assignment() == *naive.first_reaching);
  }
}

TEST_CASE("oracle limits") {
  CHECK(allocation_count(2, 24, std::uint64_t{1} << 24) == std::uint64_t{1} << 24);
  CHECK_FALSE(allocation_count(2, 25, std::uint64_t{1} << 24));
  CHECK_FALSE(allocation_count(3, 60, std::uint64_t{1} << 24));
  const Instance big(letters(20), {{binary_agent(Bundle::of({0}))}, {binary_agent(Bundle::of({1}))}});
  OracleOptions small;
  small.cap = 1000;
  CHECK_THROWS_AS(max_h(big, OneOfBestC{1}, small), CapExceeded);
  const ExistsResult trivial = exists_h(big, OneOfBestC{1}, Rational(0), small);
  CHECK(trivial.found);
  CHECK(trivial.allocations_examined == 1);
}

TEST_CASE("per-group criteria") {
  const Instance inst(letters(2), {{binary_agent(Bundle::of({0, 1}))}, {binary_agent(Bundle::of({0, 1}))}});
  const std::vector<Criterion> both_one = {OneOfBestC{1}, OneOfBestC{1}};
  CHECK(max_h(inst, both_one).best_h == 1);
  const std::vector<Criterion> greedy = {EnvyFreeUpTo{0}, OneOfBestC{1}};
  CHECK(max_h(inst, greedy).best_h == 1);
  const std::vector<Criterion> both_greedy = {OneOutOfCMms{2}, OneOfBestC{3}};
  CHECK(max_h(inst, both_greedy).best_h == 1);
}

TEST_CASE("generator specs") {
  CHECK(name(parse_generator("circle:k=3")) == "circle:k=3");
  CHECK(name(parse_generator("all-subsets:r=2,s=1,k=2,m=3")) == "all-subsets:r=2,s=1,k=2,m=3");
  CHECK(name(parse_generator("additive-third")) == "additive-third");
  CHECK_THROWS_AS(parse_generator("circel:k=3"), ParseError);
  CHECK_THROWS_AS(parse_generator("circle:q=3"), ParseError);
  CHECK_THROWS_AS(generate(parse_generator("all-subsets:r=5,s=1,k=2,m=2")), ValidationError);
  CHECK_THROWS_AS(generate(parse_generator("all-subsets:r=8,s=1,k=2,m=16"), 1000), CapExceeded);
  CHECK_FALSE(generator_forms().empty());
}

TEST_CASE("generated instances") {
  const Instance cycle = generate(ThreeGoodCycle{});
  CHECK(cycle.m() == 3);
  CHECK(cycle.group_size(0) == 3);

  for (int k = 2; k <= 4; ++k) {
    const Instance circle = generate(Circle{k});
    CHECK(circle.k() == k);
    CHECK(circle.m() == 2 * k - 1);
    for (const auto& agent : circle.group(0)) CHECK(std::get<BinaryValuation>(agent.valuation).desired.size() == k);
    CHECK(stated_bound(Circle{k}) == Rational(k, 2 * k - 1));
  }

  const Instance subsets = generate(AllSubsets{3, 1, 2, 3});
  CHECK(subsets.m() == 6);
  CHECK(subsets.group_size(0) == 20);
  CHECK(stated_bound(AllSubsets{3, 1, 2, 3}) == maxh_finite(3, 1, 2, 3));
  CHECK(matching_criterion(AllSubsets{4, 2, 2, 4}) == Criterion{OneOutOfCMms{2}});
  CHECK(matching_criterion(AllSubsets{2, 1, 2, 3}) == Criterion{OneOfBestC{2}});

  const Instance third = generate(AdditiveThird{});
  CHECK(third.group_size(0) == 3);
  CHECK(stated_bound(AdditiveThird{}) == Rational(1, 3));
}

TEST_CASE("negative results on small constructions") {
  const NegativeCheck cycle = verify_negative(ThreeGoodCycle{});
  CHECK(cycle.confirmed);
  CHECK(cycle.oracle.best_h == Rational(2, 3));

  const NegativeCheck ef = verify_negative(EFcLimit{1, 2});
  CHECK(ef.confirmed);
  CHECK(ef.oracle.best_h <= ef.bound);

  // A bound below the true optimum is not confirmed.
  const NegativeCheck wrong = verify_negative(Circle{2}, PositiveMms{}, Rational(1, 2));
  CHECK_FALSE(wrong.confirmed);
  CHECK(wrong.oracle.best_h == Rational(2, 3));
}
