#include "support.hpp"

#include "famfair/errors.hpp"
#include "famfair/instance_io.hpp"
#include "famfair/model.hpp"
#include "famfair/rational.hpp"

#include <doctest.h>

using namespace famfair;
using namespace famfair::testing;

TEST_CASE("bundle set operations") {
  const Bundle a = Bundle::of({0, 2, 5});
  const Bundle b = Bundle::of({2, 3});
  CHECK(a.size() == 3);
  CHECK((a & b) == Bundle::of({2}));
  CHECK((a | b) == Bundle::of({0, 2, 3, 5}));
  CHECK((a - b) == Bundle::of({0, 5}));
  CHECK(a.indices() == std::vector<int>{0, 2, 5});
  CHECK(Bundle::of({2}).subset_of(a));
  CHECK_FALSE(b.subset_of(a));
  CHECK(Bundle::all(64).size() == 64);
  CHECK(Bundle::all(0).empty());
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-3") == -3);
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK(to_string(Rational(6, 8)) == "3/4");
  CHECK(ratio(6, 8) == Rational(3, 4));
  CHECK_THROWS_AS(ratio(1, 0), ValidationError);
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK(to_fixed(Rational(1, 16), 3) == "0.063");
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("instance invariants") {
  const auto bin = [](std::initializer_list<int> g) { return binary_agent(Bundle::of(g)); };
  CHECK_THROWS_AS(Instance(letters(2), {{bin({0})}}), ValidationError);
  CHECK_THROWS_AS(Instance(letters(2), {{bin({0})}, {}}), ValidationError);
  CHECK_THROWS_AS(Instance(letters(2), {{bin({0, 3})}, {bin({1})}}), ValidationError);
  CHECK_THROWS_AS(Instance({"a", "a"}, {{bin({0})}, {bin({1})}}), ValidationError);
  CHECK_THROWS_AS(Instance(letters(2), {{additive_agent({1})}, {bin({1})}}), ValidationError);
  CHECK_THROWS_AS(Instance(letters(2), {{additive_agent({1, -1})}, {bin({1})}}), ValidationError);
  CHECK_THROWS_AS(Instance(letters(3), {{bin({0})}, {bin({1})}}, {0, 1}), ValidationError);

  TabularValuation not_monotone{{0, 2, 1, 1}};
  CHECK_THROWS_AS(Instance(letters(2), {{Agent{0, not_monotone, ""}}, {bin({1})}}), ValidationError);

  const Instance ok(letters(3), {{bin({0}), bin({1, 2})}, {bin({2})}}, {2, 0, 1});
  CHECK(ok.k() == 2);
  CHECK(ok.m() == 3);
  CHECK(ok.agent_count() == 3);
  CHECK(ok.group(1).front().group == 1);
  CHECK(ok.index_of("c") == 2);
  CHECK_THROWS_AS(ok.index_of("q"), ValidationError);
  CHECK(ok.good_order() == std::vector<int>{2, 0, 1});
  CHECK(ok.all_binary());
}

TEST_CASE("allocation invariants") {
  CHECK_THROWS_AS(Allocation({0, 2}, 2), ValidationError);
  CHECK_THROWS_AS(Allocation({0, -1}, 2), ValidationError);
  const std::vector<Bundle> overlapping = {Bundle::of({0, 1}), Bundle::of({1})};
  CHECK_THROWS_AS(Allocation::from_bundles(overlapping, 2), ValidationError);
  const std::vector<Bundle> missing = {Bundle::of({0}), Bundle()};
  CHECK_THROWS_AS(Allocation::from_bundles(missing, 2), ValidationError);

  const std::vector<Bundle> bundles = {Bundle::of({1}), Bundle::of({0, 2})};
  const Allocation alloc = Allocation::from_bundles(bundles, 3);
  CHECK(alloc.assignment() == std::vector<int>{1, 0, 1});
  CHECK(bundles_of(alloc) == bundles);
}

TEST_CASE("valuations") {
  CHECK(value_of(BinaryValuation{Bundle::of({0, 2})}, Bundle::of({0, 1, 2})) == 2);
  CHECK(value_of(AdditiveValuation{{1, 2, Rational(1, 2)}}, Bundle::of({1, 2})) == Rational(5, 2));
  TabularValuation t{{0, 1, 1, 3}};
  CHECK(value_of(t, Bundle::of({0, 1})) == 3);
  CHECK(good_value(t, 1) == 1);
}

TEST_CASE("binarize keeps the top goods, ties to the lower index") {
  const Instance inst(letters(4), {{additive_agent({3, 5, 5, 1})}, {additive_agent({1, 1, 1, 1})}});
  const Instance bin = binarize(inst, 2);
  CHECK(std::get<BinaryValuation>(bin.group(0).front().valuation).desired == Bundle::of({1, 2}));
  CHECK(std::get<BinaryValuation>(bin.group(1).front().valuation).desired == Bundle::of({0, 1}));
}

TEST_CASE("select_groups reorders and validates") {
  const Instance inst(letters(2), {{binary_agent(Bundle::of({0}))}, {binary_agent(Bundle::of({1}))},
                                   {binary_agent(Bundle::of({0, 1}))}});
  const std::vector<int> pick = {2, 0};
  const Instance sub = select_groups(inst, pick);
  CHECK(sub.k() == 2);
  CHECK(std::get<BinaryValuation>(sub.group(0).front().valuation).desired == Bundle::of({0, 1}));
  const std::vector<int> bad = {0, 3};
  CHECK_THROWS_AS(select_groups(inst, bad), ValidationError);
}

TEST_CASE("instance documents round-trip") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const int k = uniform(rng, 2, 4);
    const int m = uniform(rng, 1, 6);
    Instance inst = t % 3 == 0 ? random_binary(rng, k, m, 4)
                  : t % 3 == 1 ? random_additive(rng, k, m, 4, 9)
                               : random_tabular(rng, k, m, 3);
    if (t % 2 == 0) {
      std::vector<int> order(static_cast<size_t>(m));
      for (int g = 0; g < m; ++g) order[static_cast<size_t>(g)] = m - 1 - g;
      inst = inst.with_order(order);
    }
    const std::string text = serialize_instance(inst);
    const Instance back = parse_instance(text);
    CHECK(back.goods() == inst.goods());
    CHECK(back.good_order() == inst.good_order());
    REQUIRE(back.k() == inst.k());
    for (int g = 0; g < k; ++g) {
      REQUIRE(back.group_size(g) == inst.group_size(g));
      for (int j = 0; j < inst.group_size(g); ++j) {
        CHECK(back.group(g)[static_cast<size_t>(j)].valuation == inst.group(g)[static_cast<size_t>(j)].valuation);
      }
    }
    CHECK(serialize_instance(back) == text);
  }
}

TEST_CASE("instance documents: counts, ids, numbers and types") {
  const Instance inst = parse_instance(R"({
    "goods": ["a", "b"],
    "groups": [
      [{"desired": ["a"], "count": 3, "id": "fan"}],
      [{"values": [0.5, "1/3"]}, {"values": {"": 0, "a": 1, "b": 1, "a,b": 2}}]
    ]})");
  CHECK(inst.group_size(0) == 3);
  CHECK(inst.group(0)[2].id == "fan#3");
  CHECK(inst.group(1)[0].id == "G2-1");
  CHECK(std::get<AdditiveValuation>(inst.group(1)[0].valuation).values ==
        std::vector<Rational>{Rational(1, 2), Rational(1, 3)});
  CHECK(std::holds_alternative<TabularValuation>(inst.group(1)[1].valuation));
}

TEST_CASE("malformed instance documents") {
  CHECK_THROWS_AS(parse_instance("{"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"goods": ["a"]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"goods": ["a"], "groups": [[{"desired": ["z"]}], [{"desired": []}]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"goods": ["a"], "groups": [[{"desired": ["a"], "count": 0}], [{"desired": []}]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"goods": ["a"], "groups": [[{"values": [1, 2]}], [{"desired": []}]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"goods": ["a"], "groups": [[{"type": "cubic", "values": [1]}], [{"desired": []}]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"goods": ["a", "b"], "groups": [[{"values": {"": 0, "a": 1}}], [{"desired": []}]]})"),
                  ParseError);
}

TEST_CASE("allocation documents") {
  const Instance inst(letters(3), {{binary_agent(Bundle::of({0}))}, {binary_agent(Bundle::of({1}))}});
  const Allocation alloc = parse_allocation(R"({"bundles": [["c", "a"], ["b"]]})", inst);
  CHECK(alloc.assignment() == std::vector<int>{0, 1, 0});
  CHECK_THROWS_AS(parse_allocation(R"({"bundles": [["a"], ["b"]]})", inst), ParseError);
  CHECK_THROWS_AS(parse_allocation(R"({"bundles": [["a", "b"], ["b", "c"]]})", inst), ParseError);
  CHECK_THROWS_AS(parse_allocation(R"({"bundles": [["a", "b", "c"]]})", inst), ParseError);
}
