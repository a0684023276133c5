#include "famfair/trace_format.hpp"

#include "famfair/errors.hpp"

#include <fmt/format.h>

namespace famfair {

namespace {

int shown(std::span<const int> display, int group) {
  return display.empty() ? group + 1 : display[static_cast<size_t>(group)];
}

std::string quoted_list(const Instance& instance, const std::vector<int>& goods) {
  std::string out = "[";
  for (size_t i = 0; i < goods.size(); ++i) {
    if (i > 0) out += ", ";
    out += "'" + instance.label(goods[i]) + "'";
  }
  return out + "]";
}

std::string plain_list(const Instance& instance, Bundle bundle) {
  std::string out;
  for (int g : bundle.indices()) {
    if (!out.empty()) out += ",";
    out += instance.label(g);
  }
  return out;
}

std::string agents_phrase(int n, const char* kind) {
  return n == 1 ? fmt::format("1 {}agent ", kind) : fmt::format("{} {}agents", n, kind);
}

std::string valuation_line(const Instance& instance, const Valuation& valuation, int n) {
  if (const auto* b = std::get_if<BinaryValuation>(&valuation)) {
    return fmt::format(" * {} who want {}\n", agents_phrase(n, "binary "), quoted_list(instance, b->desired.indices()));
  }
  if (const auto* a = std::get_if<AdditiveValuation>(&valuation)) {
    std::string values;
    for (int g = 0; g < instance.m(); ++g) {
      if (g > 0) values += " ";
      values += instance.label(g) + "=" + to_string(a->values[static_cast<size_t>(g)]);
    }
    return fmt::format(" * {} with additive valuations: {}\n", agents_phrase(n, ""), values);
  }
  return fmt::format(" * {} with tabular valuations\n", agents_phrase(n, ""));
}

void render_final(std::string& out, const Instance& instance, const RunResult& result, const std::vector<int>& order,
                  std::span<const int> display) {
  const auto bundles = bundles_of(result.allocation);
  out += "Final allocation:\n";
  for (int g : order) {
    out += fmt::format(" *  Group {}: allocated bundle = {}, happy members = {}/{}\n", shown(display, g),
                       render_bundle(instance, bundles[static_cast<size_t>(g)]),
                       result.report.happy[static_cast<size_t>(g)], result.report.sizes[static_cast<size_t>(g)]);
  }
}

std::vector<int> index_order(int k) {
  std::vector<int> order(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) order[static_cast<size_t>(i)] = i;
  return order;
}

void render_turns(std::string& out, const Instance& instance, const ProtocolTrace& trace,
                  std::span<const int> display) {
  for (const auto& turn : trace.turns) {
    const auto slot = static_cast<size_t>(turn.slot);
    const int group = trace.engine_groups[slot];
    out += fmt::format("Turn #{}: Group {}'s turn to pick a good from {}:\n", turn.turn, shown(display, group),
                       quoted_list(instance, turn.remaining.indices()));
    out += "Calculating member weights:\n";
    out += fmt::format("{:<12}{:<12}{:<3}{:<3}{:<9}\n", "", "Desired set", "r", "s", "weight");
    const auto& desired = trace.engine_desired[slot];
    for (size_t j = 0; j < turn.members.size();) {
      size_t end = j + 1;
      while (end < turn.members.size() && desired[end] == desired[j]) ++end;
      const int n = static_cast<int>(end - j);
      const auto& member = turn.members[j];
      out += fmt::format("{:<12}{:<12}{:<3}{:<3}{:<9}\n", fmt::format("{} member{}", n, n == 1 ? "" : "s"),
                         plain_list(instance, desired[j]), member.r, member.s, render_value(member.weight));
      j = end;
    }
    out += "Calculating remaining good weights:\n";
    out += fmt::format("{:<6}{:<9}\n", "", "Weight");
    for (const auto& [good, total] : turn.good_totals) {
      out += fmt::format("{:<6}{:<9}\n", instance.label(good), render_value(total));
    }
    out += fmt::format("Group {} picks {}\n\n", shown(display, group), instance.label(turn.pick));
  }
}

std::string render_line(const Instance& instance, const RunResult& result, std::span<const int> display) {
  const ProtocolTrace& trace = *result.trace;
  const std::string label = short_label(result.criteria.front());
  std::string out;
  if (result.protocol == "line2") {
    out += fmt::format("----- Allocation between group {} and group {} -----\n\n", shown(display, 0),
                       shown(display, 1));
  }
  for (const auto& step : trace.line_steps) {
    out += fmt::format("Current partition:  {} | {}:\n", quoted_list(instance, step.left),
                       quoted_list(instance, step.right));
    for (const auto& check : step.checks) {
      out += fmt::format("   Group {}: {}/{} members think the left bundle is {}\n", shown(display, check.group),
                         check.yes, instance.group_size(check.group), label);
    }
    if (step.claimant >= 0) out += fmt::format("   Group {} gets the left bundle\n", shown(display, step.claimant));
    if (step.remainder_group >= 0) {
      out += fmt::format("   Group {} gets the remaining bundle\n", shown(display, step.remainder_group));
    }
    out += "\n";
  }
  for (const auto& note : trace.notes) out += note + "\n";
  if (!trace.notes.empty()) out += "\n";
  render_final(out, instance, result, index_order(instance.k()), display);
  return out;
}

std::string render_weighted(const Instance& instance, const RunResult& result, std::span<const int> display) {
  const ProtocolTrace& trace = *result.trace;
  std::string out = "-------\n\n";
  if (result.protocol == "rwav2") {
    out += fmt::format("RWAV protocol - Group {} plays first\n\n", shown(display, result.first_group));
  } else if (result.protocol == "cwav2") {
    out += fmt::format("CWAV protocol - seed {}\n\n", result.seed);
  } else if (result.protocol == "rwavk") {
    out += fmt::format("RWAV protocol for {} groups - Group {} plays first\n\n", instance.k(), shown(display, 0));
  } else if (result.protocol == "rwav2-enhanced") {
    out += "Enhanced RWAV protocol\n\n";
  } else if (result.protocol == "best-k") {
    out += fmt::format("1-of-best-{} protocol for {} groups\n\n", instance.k(), instance.k());
  } else {
    out += "Local search for identical groups\n\n";
  }
  for (const auto& note : trace.notes) out += note + "\n";
  if (!trace.notes.empty()) out += "\n";
  for (const auto& move : trace.moves) {
    out += fmt::format("Move {} from group {} to group {} (utility-1 members: {} -> {})\n", instance.label(move.good),
                       shown(display, move.from), shown(display, move.to), move.utility_one_before,
                       move.utility_one_after);
  }
  if (!trace.moves.empty() || result.protocol == "identical-local-search") {
    out += fmt::format("Stopped after {} moves\n\n", trace.iterations);
  }
  render_turns(out, instance, trace, display);
  std::vector<int> order = trace.engine_groups.size() == static_cast<size_t>(instance.k()) ? trace.engine_groups
                                                                                        : index_order(instance.k());
  render_final(out, instance, result, order, display);
  return out;
}

}  // namespace

std::string render_bundle(const Instance& instance, Bundle bundle) {
  std::string out = "{";
  bool first = true;
  for (int g : bundle.indices()) {
    if (!first) out += ", ";
    out += "'" + instance.label(g) + "'";
    first = false;
  }
  return out + "}";
}

std::string render_instance_summary(const Instance& instance, std::span<const Criterion> criteria,
                                    std::span<const int> display) {
  std::string out;
  for (int i = 0; i < instance.k(); ++i) {
    const Criterion& crit = criteria.size() == 1 ? criteria.front() : criteria[static_cast<size_t>(i)];
    out += fmt::format("Group {} seeks {} and has:\n", shown(display, i), describe(crit));
    const auto& agents = instance.group(i);
    for (size_t j = 0; j < agents.size();) {
      size_t end = j + 1;
      while (end < agents.size() && agents[end].valuation == agents[j].valuation) ++end;
      out += valuation_line(instance, agents[j].valuation, static_cast<int>(end - j));
      j = end;
    }
  }
  return out;
}

std::string render_run(const Instance& instance, const RunResult& result, std::span<const int> display) {
  if (!result.trace) throw ValidationError("run was not recorded with a trace");
  if (result.protocol == "line2" || result.protocol == "linek") return render_line(instance, result, display);
  return render_weighted(instance, result, display);
}

}  // namespace famfair
