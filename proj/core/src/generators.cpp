#include "famfair/generators.hpp"

#include "famfair/budgets.hpp"
#include "famfair/errors.hpp"

#include <fmt/format.h>

#include <map>

namespace famfair {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::string> labels(int m) {
  std::vector<std::string> out;
  for (int g = 1; g <= m; ++g) out.push_back("g" + std::to_string(g));
  return out;
}

Agent binary(Bundle desired) { return Agent{0, BinaryValuation{desired}, ""}; }

std::vector<std::vector<Agent>> copies(const std::vector<Agent>& members, int k) {
  std::vector<std::vector<Agent>> groups(static_cast<size_t>(k), members);
  for (int i = 0; i < k; ++i) {
    for (size_t j = 0; j < members.size(); ++j) {
      groups[static_cast<size_t>(i)][j].id = fmt::format("G{}-{}", i + 1, j + 1);
    }
  }
  return groups;
}

std::map<std::string, int> parse_params(const std::string& text, const std::string& full) {
  std::map<std::string, int> out;
  size_t at = 0;
  while (at <= text.size() && !text.empty()) {
    const size_t comma = std::min(text.find(',', at), text.size());
    const std::string item = text.substr(at, comma - at);
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ParseError("malformed generator parameter '" + item + "' in '" + full + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (value.size() > 6 || value.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("generator parameter " + key + " must be a small nonnegative integer");
    }
    if (!out.emplace(key, std::stoi(value)).second) throw ParseError("repeated generator parameter " + key);
    at = comma + 1;
  }
  return out;
}

int take(std::map<std::string, int>& params, const std::string& key, const std::string& full) {
  auto it = params.find(key);
  if (it == params.end()) throw ParseError("generator '" + full + "' is missing parameter " + key);
  const int v = it->second;
  params.erase(it);
  return v;
}

/// c with floor(r / c) = s and c >= k, preferring the smallest.
int out_of_c_for(int r, int s, int k) {
  for (int c = k; c <= r; ++c) {
    if (r / c == s) return c;
  }
  throw ValidationError(fmt::format("no 1-out-of-c-mms criterion gives s={} for r={} with k={}", s, r, k));
}

AllSubsets as_all_subsets(const EFcLimit& e) { return {2 * e.l, e.l - e.c / 2, 2, 2 * e.l}; }

void check_all_subsets(const AllSubsets& a) {
  if (a.k < 2 || a.m < 1 || a.s < 1 || a.r < a.s || a.r > a.k * a.m) {
    throw ValidationError(fmt::format("all-subsets needs k >= 2, m >= 1 and 1 <= s <= r <= k*m (got r={},s={},k={},m={})",
                                      a.r, a.s, a.k, a.m));
  }
  if (a.k * a.m > kMaxGoods) throw ValidationError("all-subsets has more than 64 goods");
}

}  // namespace

std::vector<std::string> generator_forms() {
  return {"three-good-cycle:k=2", "all-subsets:r=2,s=1,k=2,m=3", "circle:k=3", "additive-third",
          "efc-limit:c=1,l=2"};
}

GeneratorSpec parse_generator(std::string_view text) {
  const std::string full(text);
  const size_t colon = full.find(':');
  const std::string kind = full.substr(0, colon);
  auto params = parse_params(colon == std::string::npos ? std::string() : full.substr(colon + 1), full);
  GeneratorSpec spec;
  if (kind == "three-good-cycle") {
    spec = ThreeGoodCycle{params.count("k") ? take(params, "k", full) : 2};
  } else if (kind == "all-subsets") {
    AllSubsets a;
    a.r = take(params, "r", full);
    a.s = take(params, "s", full);
    a.k = take(params, "k", full);
    a.m = take(params, "m", full);
    spec = a;
  } else if (kind == "circle") {
    spec = Circle{take(params, "k", full)};
  } else if (kind == "additive-third") {
    spec = AdditiveThird{};
  } else if (kind == "efc-limit") {
    EFcLimit e;
    e.c = take(params, "c", full);
    e.l = take(params, "l", full);
    spec = e;
  } else {
    const auto forms = generator_forms();
    std::vector<std::string> kinds;
    for (const auto& f : forms) kinds.push_back(f.substr(0, f.find(':')));
    std::string msg = "unknown generator '" + kind + "'; accepted forms:";
    for (const auto& f : forms) msg += " " + f;
    msg += "; did you mean '" + closest_name(kind, kinds) + "'?";
    throw ParseError(msg);
  }
  if (!params.empty()) throw ParseError("unexpected generator parameter " + params.begin()->first + " in '" + full + "'");
  return spec;
}

std::string name(const GeneratorSpec& spec) {
  return std::visit(Overloaded{
                        [](const ThreeGoodCycle& t) { return fmt::format("three-good-cycle:k={}", t.k); },
                        [](const AllSubsets& a) {
                          return fmt::format("all-subsets:r={},s={},k={},m={}", a.r, a.s, a.k, a.m);
                        },
                        [](const Circle& c) { return fmt::format("circle:k={}", c.k); },
                        [](const AdditiveThird&) { return std::string("additive-third"); },
                        [](const EFcLimit& e) { return fmt::format("efc-limit:c={},l={}", e.c, e.l); },
                    },
                    spec);
}

Instance generate(const GeneratorSpec& spec, long max_members) {
  return std::visit(
      Overloaded{
          [](const ThreeGoodCycle& t) {
            if (t.k != 2) throw ValidationError("three-good-cycle is defined for k=2 only");
            std::vector<Agent> members;
            for (int g = 0; g < 3; ++g) members.push_back(binary(Bundle::all(3) - Bundle::of({g})));
            return Instance(labels(3), copies(members, 2));
          },
          [max_members](const AllSubsets& a) {
            check_all_subsets(a);
            const int goods = a.k * a.m;
            const BigInt count = binomial(goods, a.r);
            if (count > max_members) {
              throw CapExceeded(fmt::format("all-subsets would create {} members per group", count.get_str()));
            }
            std::vector<Agent> members;
            // r-subsets in increasing bit-mask order.
            std::uint64_t mask = (std::uint64_t{1} << a.r) - 1;
            const std::uint64_t limit = goods == 64 ? 0 : std::uint64_t{1} << goods;
            while (a.r > 0 && (goods == 64 || mask < limit)) {
              members.push_back(binary(Bundle(mask)));
              const std::uint64_t low = mask & (~mask + 1);
              const std::uint64_t ripple = mask + low;
              if (ripple == 0) break;
              mask = (((ripple ^ mask) >> 2) / low) | ripple;
            }
            if (a.r == 0) members.push_back(binary(Bundle()));
            return Instance(labels(goods), copies(members, a.k));
          },
          [](const Circle& c) {
            if (c.k < 2 || 2 * c.k - 1 > kMaxGoods) throw ValidationError("circle needs 2 <= k <= 32");
            const int m = 2 * c.k - 1;
            std::vector<Agent> members;
            for (int start = 0; start < m; ++start) {
              Bundle window;
              for (int j = 0; j < c.k; ++j) window.insert((start + j) % m);
              members.push_back(binary(window));
            }
            return Instance(labels(m), copies(members, c.k));
          },
          [](const AdditiveThird&) {
            std::vector<Agent> members;
            for (int rot = 0; rot < 3; ++rot) {
              std::vector<Rational> values(3, Rational(1));
              values[static_cast<size_t>(rot)] = 2;
              members.push_back(Agent{0, AdditiveValuation{values}, ""});
            }
            return Instance(labels(3), copies(members, 2));
          },
          [max_members](const EFcLimit& e) {
            if (e.l < 1 || e.c < 0 || e.c / 2 >= e.l) throw ValidationError("efc-limit needs l >= 1 and c/2 < l");
            return generate(as_all_subsets(e), max_members);
          },
      },
      spec);
}

Criterion matching_criterion(const GeneratorSpec& spec) {
  return std::visit(Overloaded{
                        [](const ThreeGoodCycle&) -> Criterion { return PositiveMms{}; },
                        [](const AllSubsets& a) -> Criterion {
                          check_all_subsets(a);
                          if (a.s == 1) return OneOfBestC{a.r};
                          return OneOutOfCMms{out_of_c_for(a.r, a.s, a.k)};
                        },
                        [](const Circle&) -> Criterion { return PositiveMms{}; },
                        [](const AdditiveThird&) -> Criterion { return FractionMms{Rational(51, 100)}; },
                        [](const EFcLimit& e) -> Criterion { return EnvyFreeUpTo{e.c}; },
                    },
                    spec);
}

Rational stated_bound(const GeneratorSpec& spec) {
  return std::visit(Overloaded{
                        [](const ThreeGoodCycle&) { return Rational(2, 3); },
                        [](const AllSubsets& a) {
                          check_all_subsets(a);
                          return maxh_finite(a.r, a.s, a.k, a.m);
                        },
                        [](const Circle& c) {
                          Rational q(c.k, 2 * c.k - 1);
                          q.canonicalize();
                          return q;
                        },
                        [](const AdditiveThird&) { return Rational(1, 3); },
                        [](const EFcLimit& e) {
                          const AllSubsets a = as_all_subsets(e);
                          return maxh_finite(a.r, a.s, a.k, a.m);
                        },
                    },
                    spec);
}

NegativeCheck verify_negative(const GeneratorSpec& spec, const Criterion& criterion, const Rational& bound,
                              const OracleOptions& options) {
  const Instance instance = generate(spec);
  OracleResult oracle = max_h(instance, criterion, options);
  const bool confirmed = oracle.best_h <= bound;
  return {confirmed, bound, std::move(oracle)};
}

NegativeCheck verify_negative(const GeneratorSpec& spec, const OracleOptions& options) {
  return verify_negative(spec, matching_criterion(spec), stated_bound(spec), options);
}

}  // namespace famfair
