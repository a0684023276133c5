#include "famfair/instance_io.hpp"

#include "famfair/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace famfair {

namespace {

using Json = nlohmann::ordered_json;

std::string where(int group, int entry) {
  return "group " + std::to_string(group + 1) + ", entry " + std::to_string(entry + 1);
}

Rational number(const Json& j, const std::string& context) {
  try {
    if (j.is_number_integer()) return Rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument&) {
  } catch (const ParseError&) {
  }
  throw ParseError(context + ": expected a number, decimal string or \"p/q\", got " + j.dump());
}

Json number_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return Json(q.get_num().get_si());
  return Json(to_string(q));
}

const Json& field(const Json& obj, const char* key, const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(context + ": missing \"" + key + "\"");
  return *it;
}

Bundle label_set(const Json& list,
                 const std::unordered_map<std::string, int>& index, const std::string& context) {
  if (!list.is_array()) throw ParseError(context + ": expected a list of good labels");
  Bundle out;
  for (const auto& item : list) {
    if (!item.is_string()) throw ParseError(context + ": good labels must be strings");
    auto it = index.find(item.get<std::string>());
    if (it == index.end()) throw ParseError(context + ": unknown good '" + item.get<std::string>() + "'");
    if (out.contains(it->second)) throw ParseError(context + ": good '" + item.get<std::string>() + "' listed twice");
    out.insert(it->second);
  }
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

Valuation parse_valuation(const Json& entry, const std::vector<std::string>& goods,
                          const std::unordered_map<std::string, int>& index, const std::string& context) {
  std::string type;
  if (auto it = entry.find("type"); it != entry.end()) {
    if (!it->is_string()) throw ParseError(context + ": \"type\" must be a string");
    type = it->get<std::string>();
  } else if (entry.contains("desired")) {
    type = "binary";
  } else if (entry.contains("values")) {
    type = entry["values"].is_object() ? "tabular" : "additive";
  } else {
    throw ParseError(context + ": agent needs \"desired\" or \"values\"");
  }

  if (type == "binary") return BinaryValuation{label_set(field(entry, "desired", context), index, context)};
  const Json& values = field(entry, "values", context);
  if (type == "additive") {
    if (!values.is_array()) throw ParseError(context + ": additive \"values\" must be a list");
    if (values.size() != goods.size()) {
      throw ParseError(context + ": additive \"values\" has " + std::to_string(values.size()) + " entries for " +
                       std::to_string(goods.size()) + " goods");
    }
    AdditiveValuation v;
    for (const auto& x : values) v.values.push_back(number(x, context));
    return v;
  }
  if (type == "tabular") {
    if (!values.is_object()) throw ParseError(context + ": tabular \"values\" must be an object");
    if (goods.size() > static_cast<size_t>(kMaxTabularGoods)) {
      throw ParseError(context + ": tabular valuations allow at most 16 goods");
    }
    const size_t size = size_t{1} << goods.size();
    std::vector<std::optional<Rational>> table(size);
    for (const auto& [key, x] : values.items()) {
      Bundle b;
      std::stringstream ss(key);
      std::string label;
      while (std::getline(ss, label, ',')) {
        label = trim(label);
        if (label.empty()) continue;
        auto it = index.find(label);
        if (it == index.end()) throw ParseError(context + ": unknown good '" + label + "' in tabular key");
        b.insert(it->second);
      }
      if (table[b.bits()]) throw ParseError(context + ": tabular key '" + key + "' repeats a bundle");
      table[b.bits()] = number(x, context);
    }
    TabularValuation v;
    for (size_t mask = 0; mask < size; ++mask) {
      if (!table[mask]) throw ParseError(context + ": tabular valuation misses a bundle");
      v.table.push_back(*table[mask]);
    }
    return v;
  }
  throw ParseError(context + ": unknown agent type '" + type + "'");
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json bundle_json(const Instance& instance, Bundle bundle) {
  Json out = Json::array();
  for (int g : bundle.indices()) out.push_back(instance.label(g));
  return out;
}

Json bundles_json(const Instance& instance, const Allocation& allocation) {
  Json out = Json::array();
  for (const auto& b : bundles_of(allocation)) out.push_back(bundle_json(instance, b));
  return out;
}

Json report_fields(const FairnessReport& report) {
  Json out = Json::object();
  Json happy = Json::array();
  for (size_t i = 0; i < report.happy.size(); ++i) happy.push_back({report.happy[i], report.sizes[i]});
  out["happy"] = happy;
  out["h"] = to_string(report.h);
  out["verdicts"] = report.verdicts;
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance parse_instance(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");
  const Json& goods_json = field(doc, "goods", "instance");
  if (!goods_json.is_array()) throw ParseError("\"goods\" must be a list of labels");
  std::vector<std::string> goods;
  std::unordered_map<std::string, int> index;
  for (const auto& g : goods_json) {
    if (!g.is_string()) throw ParseError("good labels must be strings");
    goods.push_back(g.get<std::string>());
    index.emplace(goods.back(), static_cast<int>(goods.size()) - 1);
  }
  if (goods.size() > static_cast<size_t>(kMaxGoods)) throw ParseError("at most 64 goods are supported");

  const Json& groups_json = field(doc, "groups", "instance");
  if (!groups_json.is_array()) throw ParseError("\"groups\" must be a list of groups");
  std::vector<std::vector<Agent>> groups;
  for (size_t gi = 0; gi < groups_json.size(); ++gi) {
    const Json& group = groups_json[gi];
    if (!group.is_array()) throw ParseError("group " + std::to_string(gi + 1) + " must be a list of agents");
    std::vector<Agent> agents;
    for (size_t ei = 0; ei < group.size(); ++ei) {
      const std::string context = where(static_cast<int>(gi), static_cast<int>(ei));
      const Json& entry = group[ei];
      if (!entry.is_object()) throw ParseError(context + ": agent must be an object");
      const Valuation valuation = parse_valuation(entry, goods, index, context);
      long count = 1;
      if (auto it = entry.find("count"); it != entry.end()) {
        if (!it->is_number_integer() || it->get<long>() < 1 || it->get<long>() > 1000000) {
          throw ParseError(context + ": \"count\" must be a positive integer");
        }
        count = it->get<long>();
      }
      std::string id;
      if (auto it = entry.find("id"); it != entry.end()) {
        if (!it->is_string()) throw ParseError(context + ": \"id\" must be a string");
        id = it->get<std::string>();
      }
      for (long c = 0; c < count; ++c) {
        std::string agent_id;
        if (id.empty()) {
          agent_id = "G" + std::to_string(gi + 1) + "-" + std::to_string(agents.size() + 1);
        } else {
          agent_id = count == 1 ? id : id + "#" + std::to_string(c + 1);
        }
        agents.push_back(Agent{static_cast<int>(gi), valuation, agent_id});
      }
    }
    groups.push_back(std::move(agents));
  }

  std::vector<int> order;
  if (auto it = doc.find("order"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("\"order\" must be a list of good labels");
    for (const auto& g : *it) {
      if (!g.is_string() || !index.count(g.get<std::string>())) {
        throw ParseError("\"order\" names unknown good " + g.dump());
      }
      order.push_back(index.at(g.get<std::string>()));
    }
  }
  return Instance(std::move(goods), std::move(groups), std::move(order));
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

std::string serialize_instance(const Instance& instance) {
  Json doc = Json::object();
  Json goods = Json::array();
  for (const auto& g : instance.goods()) goods.push_back(g.label);
  doc["goods"] = goods;
  Json groups = Json::array();
  for (const auto& group : instance.groups()) {
    Json agents = Json::array();
    for (const auto& agent : group) {
      Json entry = Json::object();
      entry["id"] = agent.id;
      if (const auto* b = std::get_if<BinaryValuation>(&agent.valuation)) {
        entry["type"] = "binary";
        entry["desired"] = bundle_json(instance, b->desired);
      } else if (const auto* a = std::get_if<AdditiveValuation>(&agent.valuation)) {
        entry["type"] = "additive";
        Json values = Json::array();
        for (const auto& v : a->values) values.push_back(number_json(v));
        entry["values"] = values;
      } else {
        const auto& t = std::get<TabularValuation>(agent.valuation);
        entry["type"] = "tabular";
        Json values = Json::object();
        for (size_t mask = 0; mask < t.table.size(); ++mask) {
          std::string key;
          for (int g : Bundle(mask).indices()) key += (key.empty() ? "" : ",") + instance.label(g);
          values[key] = number_json(t.table[mask]);
        }
        entry["values"] = values;
      }
      agents.push_back(entry);
    }
    groups.push_back(agents);
  }
  doc["groups"] = groups;
  bool identity = true;
  for (int i = 0; i < instance.m(); ++i) identity = identity && instance.good_order()[static_cast<size_t>(i)] == i;
  if (!identity) {
    Json order = Json::array();
    for (int g : instance.good_order()) order.push_back(instance.label(g));
    doc["order"] = order;
  }
  return doc.dump(2) + "\n";
}

Allocation parse_allocation(std::string_view text, const Instance& instance) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("allocation document must be a JSON object");
  const Json& bundles = field(doc, "bundles", "allocation");
  if (!bundles.is_array() || bundles.size() != static_cast<size_t>(instance.k())) {
    throw ParseError("\"bundles\" must list one bundle per group (" + std::to_string(instance.k()) + ")");
  }
  std::vector<std::string> goods;
  std::unordered_map<std::string, int> index;
  for (const auto& g : instance.goods()) {
    goods.push_back(g.label);
    index.emplace(g.label, g.index);
  }
  std::vector<int> assignment(static_cast<size_t>(instance.m()), -1);
  for (size_t i = 0; i < bundles.size(); ++i) {
    const Bundle b = label_set(bundles[i], index, "bundle " + std::to_string(i + 1));
    for (int g : b.indices()) {
      if (assignment[static_cast<size_t>(g)] >= 0) throw ParseError("good '" + goods[static_cast<size_t>(g)] + "' is in two bundles");
      assignment[static_cast<size_t>(g)] = static_cast<int>(i);
    }
  }
  for (int g = 0; g < instance.m(); ++g) {
    if (assignment[static_cast<size_t>(g)] < 0) throw ParseError("good '" + goods[static_cast<size_t>(g)] + "' is not allocated");
  }
  return Allocation(std::move(assignment), instance.k());
}

Allocation load_allocation(const std::string& path, const Instance& instance) {
  return parse_allocation(read_file(path), instance);
}

std::string serialize_allocation(const Instance& instance, const Allocation& allocation,
                                 const FairnessReport& report) {
  Json doc = Json::object();
  doc["bundles"] = bundles_json(instance, allocation);
  doc.update(report_fields(report));
  return doc.dump(2) + "\n";
}

std::string serialize_run(const Instance& instance, const RunResult& result) {
  Json doc = Json::object();
  doc["protocol"] = result.protocol;
  Json criteria = Json::array();
  for (const auto& c : result.criteria) criteria.push_back(name(c));
  doc["criteria"] = criteria;
  doc["first_group"] = result.first_group + 1;
  if (result.protocol == "cwav2") doc["seed"] = result.seed;
  doc["bundles"] = bundles_json(instance, result.allocation);
  doc.update(report_fields(result.report));
  Json guarantee = Json::array();
  for (const auto& g : result.guarantee) guarantee.push_back(render_bound(g));
  doc["guarantee"] = guarantee;
  doc["in_expectation"] = result.in_expectation;
  doc["meets_guarantee"] = meets_guarantee(result);
  return doc.dump(2) + "\n";
}

std::string serialize_oracle(const Instance& instance, const OracleResult& result,
                             const std::optional<Rational>& bound) {
  Json doc = Json::object();
  doc["best_h"] = to_string(result.best_h);
  doc["witness"] = bundles_json(instance, result.witness);
  doc["allocations_examined"] = result.allocations_examined;
  if (bound) {
    doc["bound"] = to_string(*bound);
    doc["within_bound"] = result.best_h <= *bound;
  }
  return doc.dump(2) + "\n";
}

std::string serialize_exists(const Instance& instance, const ExistsResult& result, const Rational& h) {
  Json doc = Json::object();
  doc["h"] = to_string(h);
  doc["exists"] = result.found;
  doc["witness"] = result.witness ? bundles_json(instance, *result.witness) : Json(nullptr);
  doc["allocations_examined"] = result.allocations_examined;
  return doc.dump(2) + "\n";
}

}  // namespace famfair
