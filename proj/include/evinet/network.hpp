#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evinet/bba.hpp"
#include "evinet/errors.hpp"
#include "evinet/frame.hpp"

namespace evinet {

enum class VariableKind { hypothesis, intermediate, observable };

inline const char* kind_name(VariableKind k) {
  switch (k) {
    case VariableKind::hypothesis: return "hypothesis";
    case VariableKind::intermediate: return "intermediate";
    case VariableKind::observable: return "observable";
  }
  return "unknown";
}

inline VariableKind kind_from_name(const std::string& name) {
  if (name == "hypothesis") return VariableKind::hypothesis;
  if (name == "intermediate") return VariableKind::intermediate;
  if (name == "observable") return VariableKind::observable;
  fail(Errc::ParseError, "unknown variable kind '" + name + "'");
}

struct Variable {
  std::string id;
  FramePtr frame;
  VariableKind kind = VariableKind::observable;
  std::string description;

  const std::vector<std::string>& state_descriptions() const {
    return frame->state_descriptions();
  }
};

// Per-edge conditional: one normalized BBA over the child frame for every
// parent state.
struct ConditionalBba {
  std::string parent;
  std::string child;
  std::map<std::string, Bba> table;

  const Bba& row(const std::string& parent_state) const {
    auto it = table.find(parent_state);
    if (it == table.end()) {
      fail(Errc::IncompleteConditionalTable,
           "edge " + parent + "->" + child + " has no row for state '" +
               parent_state + "'");
    }
    return it->second;
  }
};

// A focal set is admissible for elicited evidence if it is a singleton, a
// pair, or the full frame.
inline bool in_restricted_family(Subset subset, const Frame& frame) {
  const int size = subset_size(subset);
  return size == 1 || size == 2 || subset == frame.full_mask();
}

inline bool obeys_restricted_family(const Bba& bba) {
  for (const auto& [subset, mass] : bba.masses()) {
    (void)mass;
    if (!in_restricted_family(subset, *bba.frame())) return false;
  }
  return true;
}

struct NetworkMeta {
  int depth_limit = 4;
  int max_in_degree = 3;
  int max_out_degree = 6;
  int max_nodes = 64;
  bool truncated = false;
  // Optional provenance: snippet ids that motivated each edge.
  std::map<std::string, std::vector<std::string>> edge_snippets;
};

inline std::string edge_key(const std::string& parent,
                            const std::string& child) {
  return parent + "->" + child;
}

// Directed evidential network rooted at a single hypothesis variable.
// A value type: the mutating operations below return updated copies.
class EvidentialNetwork {
 public:
  explicit EvidentialNetwork(Variable root, NetworkMeta meta = {})
      : meta_(std::move(meta)) {
    if (root.kind != VariableKind::hypothesis) {
      fail(Errc::TypeConstraint, "network root must be a hypothesis variable");
    }
    root_ = root.id;
    variables_.emplace(root.id, std::move(root));
  }

  const std::string& root() const { return root_; }
  const std::map<std::string, Variable>& variables() const {
    return variables_;
  }
  const std::vector<ConditionalBba>& edges() const { return edges_; }
  const NetworkMeta& meta() const { return meta_; }
  NetworkMeta& meta() { return meta_; }

  bool has_variable(const std::string& id) const {
    return variables_.count(id) > 0;
  }

  const Variable& variable(const std::string& id) const {
    auto it = variables_.find(id);
    if (it == variables_.end()) {
      fail(Errc::UnknownVariable, "no variable '" + id + "'");
    }
    return it->second;
  }

  const Variable& hypothesis() const { return variable(root_); }

  bool has_edge(const std::string& parent, const std::string& child) const {
    return find_edge(parent, child) != nullptr;
  }

  const ConditionalBba* find_edge(const std::string& parent,
                                  const std::string& child) const {
    for (const auto& e : edges_) {
      if (e.parent == parent && e.child == child) return &e;
    }
    return nullptr;
  }

  std::vector<const ConditionalBba*> edges_from(const std::string& id) const {
    std::vector<const ConditionalBba*> out;
    for (const auto& e : edges_) {
      if (e.parent == id) out.push_back(&e);
    }
    return out;
  }

  std::vector<const ConditionalBba*> edges_into(const std::string& id) const {
    std::vector<const ConditionalBba*> out;
    for (const auto& e : edges_) {
      if (e.child == id) out.push_back(&e);
    }
    return out;
  }

  int in_degree(const std::string& id) const {
    int n = 0;
    for (const auto& e : edges_) n += (e.child == id);
    return n;
  }

  int out_degree(const std::string& id) const {
    int n = 0;
    for (const auto& e : edges_) n += (e.parent == id);
    return n;
  }

  std::vector<std::string> observable_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, v] : variables_) {
      if (v.kind == VariableKind::observable) out.push_back(id);
    }
    return out;
  }

  bool path_exists(const std::string& from, const std::string& to) const {
    if (from == to) return true;
    std::vector<std::string> stack{from};
    std::set<std::string> seen{from};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      for (const auto& e : edges_) {
        if (e.parent != cur || seen.count(e.child)) continue;
        if (e.child == to) return true;
        seen.insert(e.child);
        stack.push_back(e.child);
      }
    }
    return false;
  }

  // Depth of a node below the root along existing edges (root = 0).
  // Unreachable nodes report -1.
  int depth_of(const std::string& id) const {
    std::map<std::string, int> depth{{root_, 0}};
    std::vector<std::string> frontier{root_};
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const auto& cur : frontier) {
        for (const auto& e : edges_) {
          if (e.parent != cur) continue;
          if (!depth.count(e.child) || depth[e.child] > depth[cur] + 1) {
            depth[e.child] = depth[cur] + 1;
            next.push_back(e.child);
          }
        }
      }
      frontier = std::move(next);
    }
    auto it = depth.find(id);
    return it == depth.end() ? -1 : it->second;
  }

  friend EvidentialNetwork add_variable(EvidentialNetwork net, Variable v);
  friend EvidentialNetwork add_edge(EvidentialNetwork net,
                                    ConditionalBba conditional);

 private:
  std::map<std::string, Variable> variables_;
  std::vector<ConditionalBba> edges_;
  std::string root_;
  NetworkMeta meta_;
};

inline EvidentialNetwork add_variable(EvidentialNetwork net, Variable v) {
  if (net.variables_.count(v.id)) {
    fail(Errc::DuplicateId, "variable '" + v.id + "' already present");
  }
  if (v.kind == VariableKind::hypothesis) {
    fail(Errc::DuplicateHypothesis,
         "network already has hypothesis '" + net.root_ + "'");
  }
  if (!v.frame) fail(Errc::InvalidFrame, "variable '" + v.id + "' has no frame");
  net.variables_.emplace(v.id, std::move(v));
  return net;
}

inline void validate_conditional(const EvidentialNetwork& net,
                                 const ConditionalBba& conditional) {
  const Variable& parent = net.variable(conditional.parent);
  const Variable& child = net.variable(conditional.child);
  for (const auto& state : parent.frame->states()) {
    auto it = conditional.table.find(state);
    if (it == conditional.table.end()) {
      fail(Errc::IncompleteConditionalTable,
           "edge " + edge_key(conditional.parent, conditional.child) +
               " missing row for parent state '" + state + "'");
    }
    const Bba& row = it->second;
    check_same_frame(*row.frame(), *child.frame, "conditional row");
    if (row.conflict() != 0.0) {
      fail(Errc::InvalidMass, "conditional row must be normalized");
    }
    if (!obeys_restricted_family(row)) {
      fail(Errc::MalformedElicitation,
           "conditional row for '" + state + "' on edge " +
               edge_key(conditional.parent, conditional.child) +
               " violates the singleton/pair/full-frame focal family");
    }
  }
  for (const auto& [state, row] : conditional.table) {
    (void)row;
    if (!parent.frame->has_state(state)) {
      fail(Errc::UnknownState, "conditional row for unknown parent state '" +
                                   state + "'");
    }
  }
}

inline EvidentialNetwork add_edge(EvidentialNetwork net,
                                  ConditionalBba conditional) {
  if (!net.has_variable(conditional.parent)) {
    fail(Errc::UnknownVariable, "edge parent '" + conditional.parent + "'");
  }
  if (!net.has_variable(conditional.child)) {
    fail(Errc::UnknownVariable, "edge child '" + conditional.child + "'");
  }
  const Variable& child = net.variable(conditional.child);
  if (net.has_edge(conditional.parent, conditional.child)) {
    fail(Errc::DuplicateId,
         "edge " + edge_key(conditional.parent, conditional.child) +
             " already present");
  }
  if (net.path_exists(conditional.child, conditional.parent)) {
    fail(Errc::CycleDetected,
         "edge " + edge_key(conditional.parent, conditional.child) +
             " would close a cycle");
  }
  if (child.kind == VariableKind::hypothesis) {
    fail(Errc::TypeConstraint, "no edge may target the hypothesis node");
  }
  if (net.out_degree(conditional.parent) + 1 > net.meta_.max_out_degree) {
    fail(Errc::DegreeCapExceeded, "out-degree cap at '" + conditional.parent +
                                      "' (" +
                                      std::to_string(net.meta_.max_out_degree) +
                                      ")");
  }
  if (net.in_degree(conditional.child) + 1 > net.meta_.max_in_degree) {
    fail(Errc::DegreeCapExceeded, "in-degree cap at '" + conditional.child +
                                      "' (" +
                                      std::to_string(net.meta_.max_in_degree) +
                                      ")");
  }
  validate_conditional(net, conditional);
  net.edges_.push_back(std::move(conditional));
  return net;
}

// Directed-edge diff between a candidate and a reference network.
struct StructureDiff {
  int shd = 0;
  double edge_precision = 1.0;
  double edge_recall = 1.0;
  std::vector<std::pair<std::string, std::string>> missing;
  std::vector<std::pair<std::string, std::string>> extra;
  std::vector<std::pair<std::string, std::string>> reversed;  // as in candidate
};

// Compares edge sets by variable id. A reversed edge counts once toward the
// SHD and is neither missing nor extra.
inline StructureDiff structure_diff(const EvidentialNetwork& candidate,
                                    const EvidentialNetwork& reference) {
  if (candidate.root() != reference.root()) {
    fail(Errc::UnalignableVariables,
         "root mismatch: '" + candidate.root() + "' vs '" + reference.root() +
             "'");
  }
  std::set<std::pair<std::string, std::string>> cand;
  std::set<std::pair<std::string, std::string>> ref;
  for (const auto& e : candidate.edges()) cand.emplace(e.parent, e.child);
  for (const auto& e : reference.edges()) ref.emplace(e.parent, e.child);

  StructureDiff diff;
  int correct = 0;
  for (const auto& e : cand) {
    if (ref.count(e)) {
      ++correct;
    } else if (ref.count({e.second, e.first})) {
      diff.reversed.push_back(e);
    } else {
      diff.extra.push_back(e);
    }
  }
  for (const auto& e : ref) {
    if (!cand.count(e) && !cand.count({e.second, e.first})) {
      diff.missing.push_back(e);
    }
  }
  diff.shd = static_cast<int>(diff.missing.size() + diff.extra.size() +
                              diff.reversed.size());
  diff.edge_precision =
      cand.empty() ? 1.0 : static_cast<double>(correct) / cand.size();
  diff.edge_recall =
      ref.empty() ? 1.0 : static_cast<double>(correct) / ref.size();
  return diff;
}

}  // namespace evinet
