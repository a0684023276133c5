#include "support.hpp"

#include "famfair/budgets.hpp"
#include "famfair/errors.hpp"
#include "famfair/oracles.hpp"
#include "famfair/protocols.hpp"

#include <doctest.h>

using namespace famfair;
using namespace famfair::testing;

namespace {

Agent wants(std::initializer_list<int> goods) { return binary_agent(Bundle::of(goods)); }

void check_complete(const RunResult& r, const Instance& inst) {
  REQUIRE(r.allocation.m() == inst.m());
  REQUIRE(r.allocation.k() == inst.k());
  const FairnessReport again = democratic_report(inst, r.allocation, r.criteria);
  CHECK(again.happy == r.report.happy);
  CHECK(again.h == r.report.h);
}

}  // namespace

TEST_CASE("rwav2: a single contested good goes to the first group") {
  const Instance inst({"a"}, {{wants({0})}, {wants({0})}});
  const std::vector<Criterion> crit = {OneOfBestC{1}};
  for (int first = 0; first < 2; ++first) {
    const RunResult r = rwav2(inst, crit, first);
    CHECK(r.allocation.owner(0) == first);
    CHECK(r.report.happy == (first == 0 ? std::vector<int>{1, 0} : std::vector<int>{0, 1}));
    CHECK(r.first_group == first);
  }
}

TEST_CASE("rwav2: ties go to the lowest good index") {
  const Instance inst(letters(3), {{wants({0, 1, 2})}, {wants({0, 1, 2})}});
  const std::vector<Criterion> crit = {OneOfBestC{1}};
  RunOptions opts;
  opts.record_trace = true;
  const RunResult r = rwav2(inst, crit, 0, opts);
  REQUIRE(r.trace);
  std::vector<int> picks;
  for (const auto& t : r.trace->turns) picks.push_back(t.pick);
  CHECK(picks == std::vector<int>{0, 1, 2});
  CHECK(r.allocation.assignment() == std::vector<int>{0, 1, 0});
}

TEST_CASE("rwav2: guarantee is the smallest budget present") {
  const Instance inst(letters(4), {{wants({0, 1}), wants({0, 1, 2, 3})}, {wants({2, 3})}});
  const std::vector<Criterion> crit = {OneOfBestC{2}};
  const RunResult r = rwav2(inst, crit, 0);
  // First group: min(B(2,1), B(4,1)); second group: B(2-1,1).
  CHECK(std::get<Rational>(r.guarantee[0]) == Rational(3, 4));
  CHECK(std::get<Rational>(r.guarantee[1]) == Rational(1, 2));
  CHECK(meets_guarantee(r));
}

TEST_CASE("rwav2: rejects what it cannot run") {
  const std::vector<Criterion> crit = {OneOfBestC{1}};
  const Instance additive(letters(1), {{additive_agent({1})}, {additive_agent({1})}});
  CHECK_THROWS_AS(rwav2(additive, crit, 0), ValidationError);
  const Instance three(letters(1), {{wants({0})}, {wants({0})}, {wants({0})}});
  CHECK_THROWS_AS(rwav2(three, crit, 0), ValidationError);
  const Instance two(letters(1), {{wants({0})}, {wants({0})}});
  CHECK_THROWS_AS(rwav2(two, crit, 2), ValidationError);
  const std::vector<Criterion> fraction = {FractionMms{Rational(1, 2)}};
  CHECK_THROWS_AS(rwav2(two, fraction, 0), ValidationError);
}

TEST_CASE("protocol runs are consistent and never beat the oracle") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 150; ++t) {
    const int m = uniform(rng, 1, 8);
    const Instance bin = random_binary(rng, 2, m, 5);
    const std::vector<Criterion> crit = {OneOfBestC{2}};
    const std::vector<RunResult> runs = {rwav2(bin, crit, t % 2), rwav2_enhanced(bin, 2), cwav2(bin, crit, 7)};
    const Rational best = max_h(bin, OneOfBestC{2}).best_h;
    for (const auto& r : runs) {
      check_complete(r, bin);
      CHECK(r.report.h <= best);
    }
    for (const auto& r : runs) {
      if (!r.in_expectation) CHECK(meets_guarantee(r));
    }

    const int k = uniform(rng, 2, 3);
    const Instance add = random_additive(rng, k, uniform(rng, 1, 7), 4, 9);
    const RunResult lk = linek(add);
    check_complete(lk, add);
    CHECK(lk.report.h <= max_h(add, PropUpTo{k - 1}).best_h);
    CHECK(meets_guarantee(lk));
    const RunResult bk = best_k_protocol(add);
    check_complete(bk, add);
    CHECK(meets_guarantee(bk));
  }
}

TEST_CASE("enhanced rwav2 hands out a popular good") {
  // Four of five members of group 1 want good a: 4/5 >= 3/5.
  const Instance inst(letters(4), {{wants({0, 1}), wants({0, 2}), wants({0, 3}), wants({0, 1, 2}), wants({1, 2})},
                                   {wants({0, 1}), wants({2, 3})}});
  RunOptions opts;
  opts.record_trace = true;
  const RunResult r = rwav2_enhanced(inst, 2, opts);
  CHECK(r.allocation.assignment() == std::vector<int>{0, 1, 1, 1});
  REQUIRE(r.trace);
  CHECK(r.trace->turns.empty());
  CHECK(r.trace->notes.size() == 1);
  CHECK(std::get<Rational>(r.guarantee[0]) == Rational(3, 5));
}

TEST_CASE("local search on identical groups") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 200; ++t) {
    const Instance inst = random_identical_pair(rng, uniform(rng, 2, 10), 10);
    const RunResult r = identical_local_search(inst);
    check_complete(r, inst);
    CHECK(r.report.h >= Rational(2, 3));
    CHECK(r.trace->iterations <= (inst.group_size(0) + inst.group_size(1)) / 2);
  }
  const Instance different(letters(2), {{wants({0, 1})}, {wants({0})}});
  CHECK_THROWS_AS(identical_local_search(different), ValidationError);
}

TEST_CASE("line2: EF-c for at least half of each group") {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 200; ++t) {
    const int c = uniform(rng, 1, 3);
    const Instance inst = t % 2 ? random_additive(rng, 2, uniform(rng, 1, 9), 7, 9)
                                : random_binary(rng, 2, uniform(rng, 1, 9), 7);
    const RunResult r = line2(inst, c);
    check_complete(r, inst);
    CHECK(r.criteria.front() == Criterion{EnvyFreeUpTo{c}});
    CHECK(2 * r.report.happy[0] >= r.report.sizes[0]);
    CHECK(2 * r.report.happy[1] >= r.report.sizes[1]);
  }
}

TEST_CASE("line2: the claimed block is contiguous in the line order") {
  const Instance inst = Instance(letters(5), {{additive_agent({1, 1, 1, 1, 1})}, {additive_agent({5, 0, 0, 0, 1})}})
                            .with_order({4, 3, 2, 1, 0});
  const RunResult r = line2(inst, 1);
  const auto& order = inst.good_order();
  int changes = 0;
  for (size_t i = 1; i < order.size(); ++i) {
    changes += r.allocation.owner(order[i]) != r.allocation.owner(order[i - 1]) ? 1 : 0;
  }
  CHECK(changes <= 1);
}

TEST_CASE("rwavk meets its per-group bounds") {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 200; ++t) {
    const int k = uniform(rng, 2, 4);
    const int c = uniform(rng, 1, 5);
    const Instance inst = random_binary(rng, k, uniform(rng, 1, 10), 6);
    const RunResult r = rwavk(inst, c);
    check_complete(r, inst);
    const KGroupWeights kw(k);
    for (int i = 0; i < k; ++i) {
      CHECK(std::get<double>(r.guarantee[static_cast<size_t>(i)]) == doctest::Approx(std::max(0.0, kw.B(c - i, 1))));
    }
    CHECK(meets_guarantee(r));
  }
}

TEST_CASE("cwav2 replays under a seed") {
  std::mt19937_64 rng(35);
  const std::vector<Criterion> crit = {EnvyFreeUpTo{1}};
  for (int t = 0; t < 50; ++t) {
    const Instance inst = random_binary(rng, 2, uniform(rng, 1, 10), 5);
    const RunResult a = cwav2(inst, crit, 1234);
    const RunResult b = cwav2(inst, crit, 1234);
    CHECK(a.allocation == b.allocation);
    CHECK(a.seed == 1234);
    CHECK(a.in_expectation);
  }
}

TEST_CASE("protocol names") {
  const auto names = protocol_names();
  for (const char* n : {"rwav2", "rwav2-enhanced", "identical-local-search", "line2", "linek", "rwavk", "best-k", "cwav2"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
}
