#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "evinet/combine.hpp"
#include "evinet/errors.hpp"
#include "evinet/network.hpp"

namespace evinet {

// Local evidence accumulated per variable. Absent entries mean vacuous.
struct EvidenceAssignment {
  std::map<std::string, Bba> local;

  bool has(const std::string& id) const { return local.count(id) > 0; }

  const Bba* find(const std::string& id) const {
    auto it = local.find(id);
    return it == local.end() ? nullptr : &it->second;
  }
};

struct ConflictEntry {
  std::string node;
  double k = 0.0;
};

struct Marginals {
  std::map<std::string, Bba> by_node;
  std::vector<ConflictEntry> conflict_log;
  // Nonzero when Moebius inversion of a backward transport needed clamping.
  std::vector<ConflictEntry> clamp_log;
  // Nodes whose backward transport degenerated to a vacuous message.
  std::vector<std::string> vacuous_fallbacks;

  const Bba& at(const std::string& id) const {
    auto it = by_node.find(id);
    if (it == by_node.end()) {
      fail(Errc::UnknownVariable, "no marginal for '" + id + "'");
    }
    return it->second;
  }

  double total_conflict() const {
    double total = 0.0;
    for (const auto& entry : conflict_log) total += entry.k;
    return total;
  }
};

namespace detail {

// Conjunctive fold of all inputs followed by one normalization; identical to
// chaining Dempster's rule, with the total consumed conflict reported once.
inline std::pair<Bba, double> dempster_fuse_all(
    const std::vector<const Bba*>& inputs, const FramePtr& frame,
    const std::string& where) {
  if (inputs.empty()) return {Bba::vacuous(frame), 0.0};
  Bba meet = *inputs[0];
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    meet = conjunctive_combine(meet, *inputs[i]);
  }
  const double k = meet.conflict();
  if (k >= 1.0 - kContractTol) {
    fail(Errc::TotalConflict, "all evidence conflicting at " + where);
  }
  if (k == 0.0) return {meet, 0.0};
  std::map<Subset, double> out;
  for (const auto& [subset, mass] : meet.masses()) {
    out[subset] = mass / (1.0 - k);
  }
  return {Bba::finalize(frame, std::move(out), 0.0), k};
}

}  // namespace detail

// Parent-to-child transport: mixes, over the parent's focal sets A, the
// disjunctive combination of the conditional rows for the states in A.
inline Bba forward_message(const Bba& parent_bba,
                           const ConditionalBba& conditional) {
  const Frame& parent_frame = *parent_bba.frame();
  if (conditional.table.empty()) {
    fail(Errc::IncompleteConditionalTable,
         "edge " + edge_key(conditional.parent, conditional.child) +
             " has an empty table");
  }
  const FramePtr child_frame = conditional.table.begin()->second.frame();
  std::map<Subset, double> out;
  for (const auto& [focal, mass] : parent_bba.masses()) {
    const Bba* transported = nullptr;
    Bba scratch = Bba::vacuous(child_frame);
    bool first = true;
    for (std::size_t i = 0; i < parent_frame.size(); ++i) {
      if (!(focal & (1u << i))) continue;
      const Bba& row = conditional.row(parent_frame.states()[i]);
      if (first) {
        scratch = row;
        first = false;
      } else {
        scratch = disjunctive_combine(scratch, row);
      }
    }
    transported = &scratch;
    for (const auto& [subset, row_mass] : transported->masses()) {
      out[subset] += mass * row_mass;
    }
  }
  return Bba::finalize(child_frame, std::move(out), 0.0);
}

struct BackwardResult {
  Bba message;
  double consumed_conflict = 0.0;
  double clamped = 0.0;
  bool vacuous_fallback = false;
};

// Child-to-parent transport. For each child focal set B the plausibility
// pl(A|B) = 1 - prod_{x in A} (1 - pl(B|x)) over parent subsets A is
// inverted into masses by Moebius inversion, then the per-focal results are
// mixed by the child masses and the residual empty-set mass is normalized
// away. Negative inversion artifacts are clamped and reported.
inline BackwardResult backward_message(const Bba& child_bba,
                                       const ConditionalBba& conditional,
                                       const FramePtr& parent_frame) {
  const std::size_t n = parent_frame->size();
  const std::size_t subset_count = 1u << n;
  std::vector<double> mixed(subset_count, 0.0);
  double clamped_total = 0.0;

  std::vector<double> row_pl(n, 0.0);
  std::vector<double> beta(subset_count, 0.0);
  for (const auto& [child_focal, child_mass] : child_bba.masses()) {
    for (std::size_t i = 0; i < n; ++i) {
      const Bba& row = conditional.row(parent_frame->states()[i]);
      row_pl[i] = row.plausibility(child_focal);
    }
    // Implicability beta(A) = prod_{x not in A} (1 - pl(B|x)); its Moebius
    // inversion is the conditional message for this child focal set.
    for (Subset a = 0; a < subset_count; ++a) {
      double value = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(a & (1u << i))) value *= 1.0 - row_pl[i];
      }
      beta[a] = value;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Subset bit = 1u << i;
      for (Subset a = 0; a < subset_count; ++a) {
        if (a & bit) beta[a] -= beta[a ^ bit];
      }
    }
    double positive = 0.0;
    for (Subset a = 0; a < subset_count; ++a) {
      if (beta[a] < 0.0) {
        clamped_total += child_mass * -beta[a];
        beta[a] = 0.0;
      }
      positive += beta[a];
    }
    if (positive <= 0.0) continue;  // fully degenerate focal; handled below
    for (Subset a = 0; a < subset_count; ++a) {
      mixed[a] += child_mass * beta[a] / positive;
    }
  }

  BackwardResult result{Bba::vacuous(parent_frame)};
  result.clamped = clamped_total;
  double conflict = mixed[0];
  double assigned = 0.0;
  for (Subset a = 1; a < subset_count; ++a) assigned += mixed[a];
  // Mass from fully-degenerate child focals (all row plausibilities zero)
  // never reached `mixed`; treat it as conflict to be normalized away.
  conflict += 1.0 - (conflict + assigned);
  if (conflict >= 1.0 - kContractTol) {
    result.vacuous_fallback = true;
    return result;
  }
  std::map<Subset, double> out;
  for (Subset a = 1; a < subset_count; ++a) {
    if (mixed[a] > 0.0) out[a] = mixed[a] / (1.0 - conflict);
  }
  result.message = Bba::finalize(parent_frame, std::move(out), 0.0);
  result.consumed_conflict = conflict;
  return result;
}

// Exact two-pass message passing over a singly connected network. Marginals
// are the Dempster fusion of each node's local evidence with every incoming
// message; the conflict consumed by each normalization is logged per node.
inline Marginals propagate(const EvidentialNetwork& net,
                           const EvidenceAssignment& evidence) {
  for (const auto& [id, bba] : evidence.local) {
    const Variable& var = net.variable(id);
    check_same_frame(*bba.frame(), *var.frame, ("evidence at '" + id + "'").c_str());
    if (bba.conflict() != 0.0) {
      fail(Errc::InvalidMass, "evidence at '" + id + "' must be normalized");
    }
  }

  // Undirected adjacency; determinism comes from the sorted variable map
  // and the per-node sorted neighbor lists.
  std::map<std::string, std::vector<std::pair<std::string, const ConditionalBba*>>>
      adjacency;
  for (const auto& [id, var] : net.variables()) {
    (void)var;
    adjacency[id];
  }
  for (const auto& e : net.edges()) {
    adjacency[e.parent].emplace_back(e.child, &e);
    adjacency[e.child].emplace_back(e.parent, &e);
  }
  for (auto& [id, neighbors] : adjacency) {
    (void)id;
    std::sort(neighbors.begin(), neighbors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  // BFS forest anchored at the root (or the smallest id per component),
  // rejecting any undirected loop.
  std::map<std::string, std::string> tree_parent;
  std::vector<std::string> order;
  std::set<std::string> visited;
  std::vector<std::string> anchors;
  anchors.push_back(net.root());
  for (const auto& [id, neighbors] : adjacency) {
    (void)neighbors;
    anchors.push_back(id);
  }
  for (const auto& anchor : anchors) {
    if (visited.count(anchor)) continue;
    visited.insert(anchor);
    std::vector<std::string> frontier{anchor};
    order.push_back(anchor);
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const auto& cur : frontier) {
        for (const auto& [neighbor, edge] : adjacency[cur]) {
          (void)edge;
          auto parent_it = tree_parent.find(cur);
          if (parent_it != tree_parent.end() && parent_it->second == neighbor)
            continue;
          if (visited.count(neighbor)) {
            fail(Errc::UnsupportedTopology,
                 "undirected loop through '" + cur + "' and '" + neighbor +
                     "'");
          }
          visited.insert(neighbor);
          tree_parent[neighbor] = cur;
          order.push_back(neighbor);
          next.push_back(neighbor);
        }
      }
      frontier = std::move(next);
    }
  }

  Marginals result;
  std::map<std::pair<std::string, std::string>, Bba> messages;

  auto local_of = [&](const std::string& id) -> Bba {
    if (const Bba* bba = evidence.find(id)) return *bba;
    return Bba::vacuous(net.variable(id).frame);
  };

  auto compute_message = [&](const std::string& from, const std::string& to) {
    Bba local = local_of(from);
    std::vector<const Bba*> inputs{&local};
    for (const auto& [neighbor, edge] : adjacency[from]) {
      (void)edge;
      if (neighbor == to) continue;
      auto it = messages.find({neighbor, from});
      if (it != messages.end()) inputs.push_back(&it->second);
    }
    auto [fused, k] = detail::dempster_fuse_all(
        inputs, net.variable(from).frame, "node '" + from + "'");
    if (k > 0.0) result.conflict_log.push_back({from, k});

    const ConditionalBba* edge = nullptr;
    for (const auto& [neighbor, e] : adjacency[from]) {
      if (neighbor == to) {
        edge = e;
        break;
      }
    }
    if (edge->parent == from) {
      messages.insert({{from, to}, forward_message(fused, *edge)});
    } else {
      BackwardResult back =
          backward_message(fused, *edge, net.variable(to).frame);
      if (back.vacuous_fallback) result.vacuous_fallbacks.push_back(from);
      if (back.consumed_conflict > 0.0) {
        result.conflict_log.push_back({from, back.consumed_conflict});
      }
      if (back.clamped > 0.0) result.clamp_log.push_back({from, back.clamped});
      messages.insert({{from, to}, std::move(back.message)});
    }
  };

  // Collect toward each anchor, then distribute away from it.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto parent_it = tree_parent.find(*it);
    if (parent_it != tree_parent.end()) compute_message(*it, parent_it->second);
  }
  for (const auto& node : order) {
    for (const auto& [neighbor, edge] : adjacency[node]) {
      (void)edge;
      auto parent_it = tree_parent.find(neighbor);
      if (parent_it != tree_parent.end() && parent_it->second == node) {
        compute_message(node, neighbor);
      }
    }
  }

  for (const auto& [id, var] : net.variables()) {
    Bba local = local_of(id);
    std::vector<const Bba*> inputs{&local};
    for (const auto& [neighbor, edge] : adjacency[id]) {
      (void)edge;
      auto it = messages.find({neighbor, id});
      if (it != messages.end()) inputs.push_back(&it->second);
    }
    auto [fused, k] =
        detail::dempster_fuse_all(inputs, var.frame, "node '" + id + "'");
    if (k > 0.0) result.conflict_log.push_back({id, k});
    result.by_node.emplace(id, std::move(fused));
  }
  return result;
}

}  // namespace evinet
