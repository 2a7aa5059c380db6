#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "evinet/bba.hpp"
#include "evinet/errors.hpp"
#include "evinet/frame.hpp"

namespace evinet {

// Unnormalized conjunctive product. Conflict (mass meeting on the empty set)
// is retained in the result, never reallocated. Accepts conflict-bearing
// inputs so K-way products can be folded pairwise.
inline Bba conjunctive_combine(const Bba& a, const Bba& b) {
  check_same_frame(*a.frame(), *b.frame(), "conjunctive_combine");
  std::map<Subset, double> out;
  double conflict = a.conflict() + b.conflict() - a.conflict() * b.conflict();
  for (const auto& [sa, ma] : a.masses()) {
    for (const auto& [sb, mb] : b.masses()) {
      const Subset meet = sa & sb;
      const double product = ma * mb;
      if (meet == 0) {
        conflict += product;
      } else {
        out[meet] += product;
      }
    }
  }
  return Bba::finalize(a.frame(), std::move(out), conflict);
}

// Dempster's rule: conjunctive product rescaled by 1/(1-K).
inline Bba dempster_combine(const Bba& a, const Bba& b) {
  Bba meet = conjunctive_combine(a, b);
  const double k = meet.conflict();
  if (k >= 1.0 - kContractTol) {
    fail(Errc::TotalConflict, "Dempster combination with K = 1 on frame '" +
                                  a.frame()->id() + "'");
  }
  std::map<Subset, double> out;
  for (const auto& [subset, mass] : meet.masses()) {
    out[subset] = mass / (1.0 - k);
  }
  return Bba::finalize(a.frame(), std::move(out), 0.0);
}

// Yager's rule: conjunctive product with the conflict mass transferred to
// the full frame instead of renormalizing.
inline Bba yager_combine(const Bba& a, const Bba& b) {
  Bba meet = conjunctive_combine(a, b);
  std::map<Subset, double> out = meet.masses();
  if (meet.conflict() > 0.0) {
    out[a.frame()->full_mask()] += meet.conflict();
  }
  return Bba::finalize(a.frame(), std::move(out), 0.0);
}

// K-way Yager: one conjunctive product over the whole list, then a single
// transfer of the accumulated conflict to the full frame. Not equivalent to
// chaining the 2-way rule, which re-dilutes earlier conflict.
inline Bba yager_combine_k(std::span<const Bba> inputs) {
  if (inputs.empty()) fail(Errc::EmptyList, "yager_combine_k of empty list");
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    check_same_frame(*inputs[0].frame(), *inputs[i].frame(),
                     "yager_combine_k");
  }
  if (inputs.size() == 1) return inputs[0];
  Bba meet = inputs[0];
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    meet = conjunctive_combine(meet, inputs[i]);
  }
  std::map<Subset, double> out = meet.masses();
  if (meet.conflict() > 0.0) {
    out[inputs[0].frame()->full_mask()] += meet.conflict();
  }
  return Bba::finalize(inputs[0].frame(), std::move(out), 0.0);
}

inline Bba yager_combine_k(const std::vector<Bba>& inputs) {
  return yager_combine_k(std::span<const Bba>(inputs));
}

// Disjunctive rule: masses meet on set unions. The empty set is neutral
// under union, so normalized inputs can never produce conflict.
inline Bba disjunctive_combine(const Bba& a, const Bba& b) {
  check_same_frame(*a.frame(), *b.frame(), "disjunctive_combine");
  std::map<Subset, double> out;
  const double conflict = a.conflict() * b.conflict();
  for (const auto& [sb, mb] : b.masses()) out[sb] += a.conflict() * mb;
  for (const auto& [sa, ma] : a.masses()) {
    out[sa] += ma * b.conflict();
    for (const auto& [sb, mb] : b.masses()) {
      out[sa | sb] += ma * mb;
    }
  }
  return Bba::finalize(a.frame(), std::move(out), conflict);
}

}  // namespace evinet
