#include "cli.hpp"

#include "famfair/budgets.hpp"
#include "famfair/errors.hpp"
#include "famfair/generators.hpp"
#include "famfair/instance_io.hpp"
#include "famfair/oracles.hpp"
#include "famfair/protocols.hpp"
#include "famfair/trace_format.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace famfair::cli {

namespace {

struct RunArgs {
  std::string instance;
  std::string protocol;
  std::string criterion;
  std::string groups;
  std::string order;
  std::string out;
  int first_group = 1;
  std::uint64_t seed = 0;
  std::optional<int> c;
  int binarize = 0;
  bool trace = false;
  bool no_verify = false;
};

struct CheckArgs {
  std::string instance;
  std::string allocation;
  std::string criterion;
  std::string out;
};

struct BruteArgs {
  std::string instance;
  std::string gen;
  std::string criterion;
  std::string h;
  std::string out;
  std::uint64_t cap = std::uint64_t{1} << 24;
  int threads = 0;
};

struct TableArgs {
  std::string which = "B";
  int rmax = 10;
  int smax = 6;
  int k = 2;
  bool exact = false;
};

struct GenArgs {
  std::string spec;
  std::string out;
};

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void emit(const std::string& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << doc;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write '" + path + "'");
  file << doc;
}

template <class T>
std::optional<int> parameter_of(const std::vector<Criterion>& criteria, const std::string& protocol,
                                const char* expected) {
  if (criteria.empty()) return std::nullopt;
  if (criteria.size() != 1) throw ValidationError(protocol + " takes a single criterion");
  const auto* crit = std::get_if<T>(&criteria.front());
  if (crit == nullptr) {
    throw ValidationError(fmt::format("{} works with {} criteria, not '{}'", protocol, expected, name(criteria.front())));
  }
  return crit->c;
}

RunResult run_protocol(const Instance& instance, const RunArgs& args, std::span<const int> display) {
  const auto names = protocol_names();
  if (std::find(names.begin(), names.end(), args.protocol) == names.end()) {
    std::string msg = "unknown protocol '" + args.protocol + "'; available:";
    for (const auto& n : names) msg += " " + n;
    msg += "; did you mean '" + closest_name(args.protocol, names) + "'?";
    throw ValidationError(msg);
  }
  const std::vector<Criterion> criteria = args.criterion.empty() ? std::vector<Criterion>{}
                                                                 : parse_criteria(args.criterion);
  RunOptions options;
  options.record_trace = args.trace;
  options.verify_ledger = !args.no_verify;

  int first = args.first_group - 1;
  if (!display.empty()) {
    auto it = std::find(display.begin(), display.end(), args.first_group);
    if (it != display.end()) first = static_cast<int>(it - display.begin());
  }

  const std::string& p = args.protocol;
  if (p == "rwav2" || p == "cwav2") {
    if (criteria.empty()) throw ValidationError(p + " needs --criterion");
    if (p == "rwav2") return rwav2(instance, criteria, first, options);
    return cwav2(instance, criteria, args.seed, options);
  }
  if (p == "rwav2-enhanced") {
    const int c = args.c.value_or(parameter_of<OneOfBestC>(criteria, p, "1-of-best-c").value_or(2));
    return rwav2_enhanced(instance, c, options);
  }
  if (p == "identical-local-search") {
    if (!criteria.empty()) parameter_of<OneOfBestC>(criteria, p, "1-of-best-2");
    return identical_local_search(instance, options);
  }
  if (p == "line2") {
    const int c = args.c.value_or(parameter_of<EnvyFreeUpTo>(criteria, p, "ef-c").value_or(1));
    return line2(instance, c, options);
  }
  if (p == "linek") {
    const int c = args.c.value_or(parameter_of<PropUpTo>(criteria, p, "prop-c").value_or(-1));
    return linek(instance, c, options);
  }
  if (p == "rwavk") {
    const int c = args.c.value_or(parameter_of<OneOfBestC>(criteria, p, "1-of-best-c").value_or(instance.k()));
    return rwavk(instance, c, options);
  }
  if (!criteria.empty()) parameter_of<OneOfBestC>(criteria, p, "1-of-best-k");
  return best_k_protocol(instance, options);
}

int cmd_run(const RunArgs& args, std::ostream& out) {
  Instance instance = load_instance(args.instance);
  std::vector<int> display;
  if (!args.groups.empty()) {
    std::vector<int> picked;
    for (const auto& item : split(args.groups)) {
      int g = 0;
      try {
        g = std::stoi(item);
      } catch (const std::exception&) {
        throw ValidationError("--groups expects group numbers, got '" + item + "'");
      }
      if (g < 1 || g > instance.k()) throw ValidationError(fmt::format("no group {} in the instance", g));
      picked.push_back(g - 1);
      display.push_back(g);
    }
    instance = select_groups(instance, picked);
  }
  if (!args.order.empty()) {
    std::vector<int> order;
    for (const auto& label : split(args.order)) order.push_back(instance.index_of(label));
    instance = instance.with_order(std::move(order));
  }
  if (args.binarize > 0) instance = binarize(instance, args.binarize);

  const RunResult result = run_protocol(instance, args, display);
  if (args.trace) {
    out << render_instance_summary(instance, result.criteria, display) << "\n" << render_run(instance, result, display);
    if (!args.out.empty()) emit(serialize_run(instance, result), args.out, out);
  } else {
    emit(serialize_run(instance, result), args.out, out);
  }
  return kExitOk;
}

int cmd_check(const CheckArgs& args, std::ostream& out) {
  const Instance instance = load_instance(args.instance);
  const Allocation allocation = load_allocation(args.allocation, instance);
  const auto criteria = parse_criteria(args.criterion);
  if (criteria.size() != 1 && criteria.size() != static_cast<size_t>(instance.k())) {
    throw ValidationError(fmt::format("give one criterion or one per group ({})", instance.k()));
  }
  for (const auto& c : criteria) validate(c, instance.k());
  const FairnessReport report = criteria.size() == 1 ? democratic_report(instance, allocation, criteria.front())
                                                     : democratic_report(instance, allocation, criteria);
  emit(serialize_allocation(instance, allocation, report), args.out, out);
  return kExitOk;
}

int cmd_brute(const BruteArgs& args, std::ostream& out) {
  if (args.instance.empty() == args.gen.empty()) throw ValidationError("brute needs either an instance file or --gen");
  std::optional<GeneratorSpec> spec;
  std::optional<Instance> instance;
  if (!args.gen.empty()) {
    spec = parse_generator(args.gen);
    instance = generate(*spec);
  } else {
    instance = load_instance(args.instance);
  }
  std::vector<Criterion> criteria;
  if (!args.criterion.empty()) {
    criteria = parse_criteria(args.criterion);
  } else if (spec) {
    criteria = {matching_criterion(*spec)};
  } else {
    throw ValidationError("brute needs --criterion");
  }
  for (const auto& c : criteria) validate(c, instance->k());

  OracleOptions options;
  options.cap = args.cap;
  options.threads = args.threads;
  if (!args.h.empty()) {
    const Rational h = parse_rational(args.h);
    emit(serialize_exists(*instance, exists_h(*instance, criteria, h, options), h), args.out, out);
    return kExitOk;
  }
  const OracleResult result = max_h(*instance, criteria, options);
  std::optional<Rational> bound;
  if (spec && args.criterion.empty()) bound = stated_bound(*spec);
  emit(serialize_oracle(*instance, result, bound), args.out, out);
  return kExitOk;
}

std::string cell(const Rational& q, bool exact) {
  if (exact) return to_string(q);
  if (q == 0) return "0";
  if (q == 1) return "1";
  std::string s = to_fixed(q, 3);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

std::string cell(double x, bool exact) {
  if (exact) return fmt::format("{}", x);
  if (x == 0.0) return "0";
  if (x == 1.0) return "1";
  std::string s = fmt::format("{:.3f}", x);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return s;
}

int cmd_table(const TableArgs& args, std::ostream& out) {
  if (args.rmax < 0 || args.smax < 0) throw ValidationError("--rmax and --smax must be nonnegative");
  if (args.rmax > 64) throw CapExceeded("--rmax above 64 exceeds the budget table");
  static const std::vector<std::string> kinds = {"B", "w", "C", "Bk", "maxh"};
  if (std::find(kinds.begin(), kinds.end(), args.which) == kinds.end()) {
    throw ValidationError("unknown table '" + args.which + "'; available: B w C Bk maxh; did you mean '" +
                          closest_name(args.which, kinds) + "'?");
  }
  if (args.k < 2) throw ValidationError("--k must be at least 2");
  const int smax = args.which == "Bk" ? std::min(args.smax, 1) : args.smax;
  const int width = args.exact ? 12 : 6;

  auto row_text = [&](std::vector<std::string> cells) {
    std::string line;
    for (const auto& c : cells) line += fmt::format("{:<{}}", c, width);
    line.erase(line.find_last_not_of(' ') + 1);
    return line + "\n";
  };
  std::vector<std::string> header = {"r\\s"};
  for (int s = 0; s <= smax; ++s) header.push_back(std::to_string(s));
  out << row_text(header);

  const BudgetTable& table = default_budgets();
  const KGroupWeights weights(args.k);
  for (int r = 0; r <= args.rmax; ++r) {
    std::vector<std::string> cells = {std::to_string(r)};
    const int last = args.which == "w" ? r / 2 + 2 : args.which == "Bk" ? 1 : r + 1;
    for (int s = 0; s <= std::min(smax, last); ++s) {
      if (args.which == "B") {
        cells.push_back(cell(table.B(r, s).to_rational(), args.exact));
      } else if (args.which == "w") {
        cells.push_back(cell(table.w(r, s).to_rational(), args.exact));
      } else if (args.which == "C") {
        cells.push_back(cell(table.C(r, s).to_rational(), args.exact));
      } else if (args.which == "Bk") {
        cells.push_back(cell(weights.B(r, s), args.exact));
      } else {
        cells.push_back(cell(maxh(r, s, args.k), args.exact));
      }
    }
    out << row_text(cells);
  }
  return kExitOk;
}

int cmd_gen(const GenArgs& args, std::ostream& out) {
  emit(serialize_instance(generate(parse_generator(args.spec))), args.out, out);
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Democratic fair allocation of indivisible goods among groups", "famfair"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an allocation protocol on an instance");
  run_cmd->add_option("instance", run.instance, "Instance JSON file")->required();
  run_cmd->add_option("--protocol,-p", run.protocol, "Protocol name")->required();
  run_cmd->add_option("--criterion", run.criterion, "Criterion, or comma-separated criteria per group");
  run_cmd->add_option("--first-group", run.first_group, "Group that picks first (rwav2)");
  run_cmd->add_option("--seed", run.seed, "Coin seed (cwav2)");
  run_cmd->add_option("--c", run.c, "Protocol parameter c");
  run_cmd->add_option("--binarize", run.binarize, "Convert agents to binary over their c best goods");
  run_cmd->add_option("--groups", run.groups, "Comma-separated group numbers to allocate among");
  run_cmd->add_option("--order", run.order, "Comma-separated good order for line protocols");
  run_cmd->add_flag("--trace", run.trace, "Print the human-readable trace");
  run_cmd->add_flag("--no-verify", run.no_verify, "Skip runtime ledger checks");
  run_cmd->add_option("--out,-o", run.out, "Write the result document here");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Evaluate an allocation against a criterion");
  check_cmd->add_option("instance", check.instance, "Instance JSON file")->required();
  check_cmd->add_option("allocation", check.allocation, "Allocation JSON file")->required();
  check_cmd->add_option("--criterion", check.criterion, "Criterion, or one per group")->required();
  check_cmd->add_option("--out,-o", check.out, "Write the report here");

  BruteArgs brute;
  auto* brute_cmd = app.add_subcommand("brute", "Exhaustive search for the best democratic fraction");
  brute_cmd->add_option("instance", brute.instance, "Instance JSON file");
  brute_cmd->add_option("--gen", brute.gen, "Generator spec instead of an instance file");
  brute_cmd->add_option("--criterion", brute.criterion, "Criterion, or one per group");
  brute_cmd->add_option("--fraction", brute.h, "Decide whether this democratic fraction h is reachable");
  brute_cmd->add_option("--cap", brute.cap, "Maximum number of allocations");
  brute_cmd->add_option("--threads", brute.threads, "Worker threads (0 = all cores)");
  brute_cmd->add_option("--out,-o", brute.out, "Write the result document here");

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "Print a budget or bound table");
  table_cmd->add_option("--which", table.which, "B, w, C, Bk or maxh");
  table_cmd->add_option("--rmax", table.rmax, "Largest r");
  table_cmd->add_option("--smax", table.smax, "Largest s");
  table_cmd->add_option("--k", table.k, "Number of groups (Bk, maxh)");
  table_cmd->add_flag("--exact", table.exact, "Print exact values");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated instance");
  gen_cmd->add_option("spec", gen.spec, "Generator spec, e.g. circle:k=3")->required();
  gen_cmd->add_option("--out,-o", gen.out, "Write the instance here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (check_cmd->parsed()) return cmd_check(check, out);
    if (brute_cmd->parsed()) return cmd_brute(brute, out);
    if (table_cmd->parsed()) return cmd_table(table, out);
    return cmd_gen(gen, out);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace famfair::cli
