#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evinet/network.hpp"
#include "evinet/propagate.hpp"

namespace evinet {

using Json = nlohmann::json;
// All writers emit ordered JSON so serialized artifacts are reproducible.
using OrderedJson = nlohmann::ordered_json;

inline const Json& require_field(const Json& j, const char* field,
                                 const char* what) {
  auto it = j.find(field);
  if (it == j.end()) {
    fail(Errc::ParseError,
         std::string(what) + " is missing field '" + field + "'");
  }
  return *it;
}

inline OrderedJson frame_to_json(const Frame& frame) {
  OrderedJson j;
  j["id"] = frame.id();
  j["states"] = frame.states();
  if (!frame.state_descriptions().empty()) {
    j["descriptions"] = frame.state_descriptions();
  }
  return j;
}

inline FramePtr frame_from_json(const Json& j) {
  std::vector<std::string> descriptions;
  if (j.contains("descriptions")) {
    descriptions = j["descriptions"].get<std::vector<std::string>>();
  }
  return make_frame(require_field(j, "id", "frame").get<std::string>(),
                    require_field(j, "states", "frame")
                        .get<std::vector<std::string>>(),
                    std::move(descriptions));
}

// {"frame": id, "masses": [{"set": [labels], "mass": m}, ...], "conflict": c}
// with focal sets in canonical order (ascending by state-index bitmask).
inline OrderedJson bba_to_json(const Bba& bba) {
  OrderedJson j;
  j["frame"] = bba.frame()->id();
  OrderedJson masses = OrderedJson::array();
  for (const auto& [subset, mass] : bba.masses()) {
    OrderedJson entry;
    entry["set"] = bba.frame()->labels(subset);
    entry["mass"] = mass;
    masses.push_back(std::move(entry));
  }
  j["masses"] = std::move(masses);
  j["conflict"] = bba.conflict();
  return j;
}

inline Bba bba_from_json(const Json& j, const FramePtr& frame) {
  const std::string frame_id =
      require_field(j, "frame", "BBA").get<std::string>();
  if (frame_id != frame->id()) {
    fail(Errc::FrameMismatch, "BBA names frame '" + frame_id +
                                  "', expected '" + frame->id() + "'");
  }
  std::map<Subset, double> masses;
  for (const auto& entry : require_field(j, "masses", "BBA")) {
    const Subset subset = frame->subset_of(
        require_field(entry, "set", "mass entry").get<std::vector<std::string>>());
    const double mass =
        require_field(entry, "mass", "mass entry").get<double>();
    if (masses.count(subset)) {
      fail(Errc::ParseError,
           "duplicate focal set " + frame->subset_text(subset));
    }
    masses[subset] = mass;
  }
  const double conflict = j.value("conflict", 0.0);
  return Bba::from_masses(frame, std::move(masses), conflict);
}

inline OrderedJson variable_to_json(const Variable& v) {
  OrderedJson j;
  j["id"] = v.id;
  j["kind"] = kind_name(v.kind);
  j["description"] = v.description;
  j["frame"] = frame_to_json(*v.frame);
  return j;
}

inline Variable variable_from_json(const Json& j) {
  Variable v;
  v.id = require_field(j, "id", "variable").get<std::string>();
  v.kind = kind_from_name(require_field(j, "kind", "variable").get<std::string>());
  v.description = j.value("description", std::string{});
  v.frame = frame_from_json(require_field(j, "frame", "variable"));
  return v;
}

inline OrderedJson conditional_to_json(const ConditionalBba& edge,
                                       const Frame& parent_frame) {
  OrderedJson j;
  j["parent"] = edge.parent;
  j["child"] = edge.child;
  OrderedJson table;
  for (const auto& state : parent_frame.states()) {
    table[state] = bba_to_json(edge.row(state));
  }
  j["table"] = std::move(table);
  return j;
}

inline OrderedJson network_to_json(const EvidentialNetwork& net) {
  OrderedJson j;
  j["version"] = 1;
  j["root"] = net.root();
  OrderedJson variables = OrderedJson::array();
  for (const auto& [id, v] : net.variables()) {
    (void)id;
    variables.push_back(variable_to_json(v));
  }
  j["variables"] = std::move(variables);
  OrderedJson edges = OrderedJson::array();
  for (const auto& e : net.edges()) {
    edges.push_back(conditional_to_json(e, *net.variable(e.parent).frame));
  }
  j["edges"] = std::move(edges);
  OrderedJson meta;
  meta["depth_limit"] = net.meta().depth_limit;
  meta["max_in_degree"] = net.meta().max_in_degree;
  meta["max_out_degree"] = net.meta().max_out_degree;
  meta["max_nodes"] = net.meta().max_nodes;
  meta["truncated"] = net.meta().truncated;
  OrderedJson snippets;
  for (const auto& [key, ids] : net.meta().edge_snippets) {
    snippets[key] = ids;
  }
  meta["edge_snippets"] = std::move(snippets);
  j["meta"] = std::move(meta);
  return j;
}

inline EvidentialNetwork network_from_json(const Json& j) {
  NetworkMeta meta;
  if (j.contains("meta")) {
    const Json& m = j["meta"];
    meta.depth_limit = m.value("depth_limit", meta.depth_limit);
    meta.max_in_degree = m.value("max_in_degree", meta.max_in_degree);
    meta.max_out_degree = m.value("max_out_degree", meta.max_out_degree);
    meta.max_nodes = m.value("max_nodes", meta.max_nodes);
    meta.truncated = m.value("truncated", meta.truncated);
    if (m.contains("edge_snippets")) {
      for (const auto& [key, ids] : m["edge_snippets"].items()) {
        meta.edge_snippets[key] = ids.get<std::vector<std::string>>();
      }
    }
  }
  const std::string root_id =
      require_field(j, "root", "network").get<std::string>();
  std::vector<Variable> variables;
  for (const auto& vj : require_field(j, "variables", "network")) {
    variables.push_back(variable_from_json(vj));
  }
  auto root_it =
      std::find_if(variables.begin(), variables.end(),
                   [&](const Variable& v) { return v.id == root_id; });
  if (root_it == variables.end()) {
    fail(Errc::ParseError, "network root '" + root_id + "' not in variables");
  }
  EvidentialNetwork net(*root_it, std::move(meta));
  for (const auto& v : variables) {
    if (v.id != root_id) net = add_variable(std::move(net), v);
  }
  for (const auto& ej : require_field(j, "edges", "network")) {
    ConditionalBba edge;
    edge.parent = require_field(ej, "parent", "edge").get<std::string>();
    edge.child = require_field(ej, "child", "edge").get<std::string>();
    const FramePtr child_frame = net.variable(edge.child).frame;
    for (const auto& [state, bj] :
         require_field(ej, "table", "edge").items()) {
      edge.table.emplace(state, bba_from_json(bj, child_frame));
    }
    net = add_edge(std::move(net), std::move(edge));
  }
  return net;
}

inline OrderedJson evidence_to_json(const EvidenceAssignment& evidence) {
  OrderedJson j;
  j["version"] = 1;
  OrderedJson entries;
  for (const auto& [id, bba] : evidence.local) {
    entries[id] = bba_to_json(bba);
  }
  j["evidence"] = std::move(entries);
  return j;
}

inline EvidenceAssignment evidence_from_json(const Json& j,
                                             const EvidentialNetwork& net) {
  EvidenceAssignment evidence;
  for (const auto& [id, bj] : require_field(j, "evidence", "evidence").items()) {
    evidence.local.emplace(id, bba_from_json(bj, net.variable(id).frame));
  }
  return evidence;
}

inline OrderedJson marginals_to_json(const Marginals& marginals) {
  OrderedJson j;
  OrderedJson entries;
  for (const auto& [id, bba] : marginals.by_node) {
    entries[id] = bba_to_json(bba);
  }
  j["marginals"] = std::move(entries);
  OrderedJson log = OrderedJson::array();
  for (const auto& entry : marginals.conflict_log) {
    log.push_back(OrderedJson{{"node", entry.node}, {"k", entry.k}});
  }
  j["conflict_log"] = std::move(log);
  OrderedJson clamp = OrderedJson::array();
  for (const auto& entry : marginals.clamp_log) {
    clamp.push_back(OrderedJson{{"node", entry.node}, {"k", entry.k}});
  }
  j["clamp_log"] = std::move(clamp);
  j["vacuous_fallbacks"] = marginals.vacuous_fallbacks;
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Errc::ParseError, "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::ParseError, "cannot write '" + path + "'");
  out << content;
}

inline void write_json_file(const std::string& path, const OrderedJson& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace evinet
