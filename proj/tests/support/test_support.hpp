#pragma once

// Shared test utilities: a dense brute-force oracle for the combination
// rules, random BBA/network generators, and a joint-enumeration inference
// oracle. Everything here is deliberately independent of the sparse
// implementations it checks: dense vectors over all 2^n subsets, quadratic
// pair loops, no reuse of the library's combination code.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "evinet/bba.hpp"
#include "evinet/network.hpp"
#include "evinet/propagate.hpp"

namespace evitest {

using evinet::Bba;
using evinet::EvidenceAssignment;
using evinet::EvidentialNetwork;
using evinet::Frame;
using evinet::FramePtr;
using evinet::Subset;

// Masses over every subset; index = bitmask, index 0 = empty set (conflict).
using DenseMasses = std::vector<double>;

inline DenseMasses dense_of(const Bba& bba) {
  DenseMasses dense(std::size_t{1} << bba.frame()->size(), 0.0);
  dense[0] = bba.conflict();
  for (const auto& [subset, mass] : bba.masses()) dense[subset] += mass;
  return dense;
}

inline DenseMasses oracle_conjunctive(const DenseMasses& a,
                                      const DenseMasses& b) {
  DenseMasses out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i & j] += a[i] * b[j];
    }
  }
  return out;
}

inline DenseMasses oracle_disjunctive(const DenseMasses& a,
                                      const DenseMasses& b) {
  DenseMasses out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i | j] += a[i] * b[j];
    }
  }
  return out;
}

inline DenseMasses oracle_dempster(const DenseMasses& a, const DenseMasses& b) {
  DenseMasses out = oracle_conjunctive(a, b);
  const double k = out[0];
  out[0] = 0.0;
  for (auto& mass : out) mass /= 1.0 - k;
  out[0] = 0.0;
  return out;
}

inline DenseMasses oracle_yager(const DenseMasses& a, const DenseMasses& b) {
  DenseMasses out = oracle_conjunctive(a, b);
  out[out.size() - 1] += out[0];
  out[0] = 0.0;
  return out;
}

inline DenseMasses oracle_yager_k(const std::vector<DenseMasses>& inputs) {
  DenseMasses out = inputs[0];
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    out = oracle_conjunctive(out, inputs[i]);
  }
  if (inputs.size() > 1) {
    out[out.size() - 1] += out[0];
    out[0] = 0.0;
  }
  return out;
}

inline double max_deviation(const Bba& actual, const DenseMasses& expected) {
  const DenseMasses got = dense_of(actual);
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    worst = std::max(worst, std::abs(got[i] - expected[i]));
  }
  return worst;
}

inline double max_deviation(const Bba& a, const Bba& b) {
  return max_deviation(a, dense_of(b));
}

// Deterministic RNG wrapper with stable helpers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t next() { return gen_(); }
  int uniform_int(int n) { return static_cast<int>(next() % n); }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

inline FramePtr frame_of_size(std::size_t n, const std::string& id = "f") {
  std::vector<std::string> states;
  for (std::size_t i = 0; i < n; ++i) {
    states.push_back("s" + std::to_string(i));
  }
  return evinet::make_frame(id + std::to_string(n), std::move(states));
}

// Random normalized BBA with up to `max_focals` focal sets.
inline Bba random_bba(Rng& rng, const FramePtr& frame, int max_focals = 4) {
  const Subset full = frame->full_mask();
  std::map<Subset, double> weights;
  const int focals = 1 + rng.uniform_int(max_focals);
  for (int i = 0; i < focals; ++i) {
    const Subset subset = 1 + rng.uniform_int(static_cast<int>(full));
    weights[subset] += 0.05 + rng.uniform();
  }
  return Bba::from_proportions(frame, weights);
}

inline Bba random_bayesian_bba(Rng& rng, const FramePtr& frame) {
  std::map<Subset, double> weights;
  for (std::size_t i = 0; i < frame->size(); ++i) {
    weights[static_cast<Subset>(1u << i)] = 0.05 + rng.uniform();
  }
  return Bba::from_proportions(frame, weights);
}

// Random BBA restricted to singletons, pairs, and the full frame.
inline Bba random_family_bba(Rng& rng, const FramePtr& frame,
                             int max_focals = 3) {
  std::map<Subset, double> weights;
  const int focals = 1 + rng.uniform_int(max_focals);
  for (int i = 0; i < focals; ++i) {
    const int kind = rng.uniform_int(3);
    Subset subset = 0;
    if (kind == 0 || frame->size() < 2) {
      subset = 1u << rng.uniform_int(static_cast<int>(frame->size()));
    } else if (kind == 1 && frame->size() >= 2) {
      const int a = rng.uniform_int(static_cast<int>(frame->size()));
      int b = rng.uniform_int(static_cast<int>(frame->size()));
      while (b == a) b = rng.uniform_int(static_cast<int>(frame->size()));
      subset = (1u << a) | (1u << b);
    } else {
      subset = frame->full_mask();
    }
    weights[subset] += 0.05 + rng.uniform();
  }
  weights[frame->full_mask()] += 0.05;  // keep some residual ignorance
  return Bba::from_proportions(frame, weights);
}

// Random singly connected DAG over binary variables with Bayesian rows:
// a random undirected tree, randomly oriented (which can never create an
// undirected loop), with the smallest source as the hypothesis node.
inline EvidentialNetwork random_bayesian_polytree(Rng& rng, int nodes) {
  std::vector<std::pair<int, int>> undirected;
  for (int v = 1; v < nodes; ++v) {
    undirected.emplace_back(rng.uniform_int(v), v);
  }
  std::vector<std::pair<int, int>> directed;
  std::vector<int> in_degree(nodes, 0);
  for (const auto& [a, b] : undirected) {
    if (rng.chance(0.5)) {
      directed.emplace_back(a, b);
      in_degree[b]++;
    } else {
      directed.emplace_back(b, a);
      in_degree[a]++;
    }
  }
  int root = 0;
  while (root < nodes && in_degree[root] != 0) ++root;

  auto frame_for = [&](int v) {
    return evinet::make_frame("bf" + std::to_string(v), {"t", "f"});
  };
  auto id_for = [&](int v) { return "v" + std::to_string(v); };

  evinet::NetworkMeta meta;
  meta.max_in_degree = nodes;
  meta.max_out_degree = nodes;
  EvidentialNetwork net(
      evinet::Variable{id_for(root), frame_for(root),
                       evinet::VariableKind::hypothesis, "root variable"},
      meta);
  for (int v = 0; v < nodes; ++v) {
    if (v == root) continue;
    const auto kind = in_degree[v] == 0 || rng.chance(0.5)
                          ? evinet::VariableKind::observable
                          : evinet::VariableKind::intermediate;
    net = add_variable(net, evinet::Variable{id_for(v), frame_for(v), kind,
                                             "variable " + std::to_string(v)});
  }
  for (const auto& [p, c] : directed) {
    evinet::ConditionalBba edge;
    edge.parent = id_for(p);
    edge.child = id_for(c);
    const FramePtr child_frame = net.variable(edge.child).frame;
    for (const auto& state : net.variable(edge.parent).frame->states()) {
      const double p_true = rng.uniform(0.05, 0.95);
      std::map<Subset, double> masses{{1u, p_true}, {2u, 1.0 - p_true}};
      edge.table.emplace(state, Bba::from_masses(child_frame, masses));
    }
    net = add_edge(net, edge);
  }
  return net;
}

// Exact inference by enumerating every joint assignment. The joint weight is
// the product of all edge rows at the assignment's states, every root's
// evidence, and any extra Bayesian evidence factors; this is the probability
// model that Dempster fusion of per-edge messages reduces to on Bayesian
// inputs.
inline std::map<std::string, std::vector<double>> enumerate_marginals(
    const EvidentialNetwork& net, const EvidenceAssignment& evidence) {
  std::vector<std::string> ids;
  for (const auto& [id, v] : net.variables()) {
    (void)v;
    ids.push_back(id);
  }
  const std::size_t n = ids.size();
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) {
    sizes[i] = net.variable(ids[i]).frame->size();
  }
  std::map<std::string, std::vector<double>> marginal;
  for (std::size_t i = 0; i < n; ++i) {
    marginal[ids[i]] = std::vector<double>(sizes[i], 0.0);
  }

  std::vector<std::size_t> assignment(n, 0);
  double total = 0.0;
  while (true) {
    double weight = 1.0;
    for (const auto& e : net.edges()) {
      std::size_t pi = 0;
      std::size_t ci = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (ids[i] == e.parent) pi = i;
        if (ids[i] == e.child) ci = i;
      }
      const std::string& parent_state =
          net.variable(e.parent).frame->states()[assignment[pi]];
      weight *=
          e.row(parent_state).mass(static_cast<Subset>(1u << assignment[ci]));
    }
    for (const auto& [id, bba] : evidence.local) {
      std::size_t zi = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (ids[i] == id) zi = i;
      }
      weight *= bba.mass(static_cast<Subset>(1u << assignment[zi]));
    }
    total += weight;
    for (std::size_t i = 0; i < n; ++i) {
      marginal[ids[i]][assignment[i]] += weight;
    }
    std::size_t pos = 0;
    while (pos < n) {
      if (++assignment[pos] < sizes[pos]) break;
      assignment[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  for (auto& [id, values] : marginal) {
    (void)id;
    for (auto& v : values) v /= total;
  }
  return marginal;
}

}  // namespace evitest
