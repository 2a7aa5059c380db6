#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "evinet/errors.hpp"
#include "evinet/frame.hpp"

namespace evinet {

// Basic belief assignment: a sparse mass function over non-empty subsets of a
// frame. `conflict` is the mass on the empty set; it is zero for every
// normalized BBA and nonzero only in unnormalized combination results.
class Bba {
 public:
  static Bba vacuous(FramePtr frame) {
    std::map<Subset, double> m;
    m.emplace(frame->full_mask(), 1.0);
    return Bba(std::move(frame), std::move(m), 0.0);
  }

  static Bba categorical(FramePtr frame, Subset subset) {
    if (subset == 0) fail(Errc::EmptyFocalSet, "categorical mass on empty set");
    if (subset & ~frame->full_mask()) {
      fail(Errc::UnknownState, "subset outside frame '" + frame->id() + "'");
    }
    std::map<Subset, double> m;
    m.emplace(subset, 1.0);
    return Bba(std::move(frame), std::move(m), 0.0);
  }

  static Bba categorical(const FramePtr& frame, const std::string& label) {
    return categorical(frame, frame->singleton(label));
  }

  // Validated construction from explicit masses. Masses must be positive,
  // on non-empty in-frame subsets, and sum with `conflict` to 1.
  static Bba from_masses(FramePtr frame, std::map<Subset, double> masses,
                         double conflict = 0.0) {
    double total = conflict;
    if (conflict < 0.0 || conflict > 1.0 + kContractTol) {
      fail(Errc::InvalidMass, "conflict outside [0,1]");
    }
    for (const auto& [subset, mass] : masses) {
      if (subset == 0) fail(Errc::EmptyFocalSet, "mass stored on empty set");
      if (subset & ~frame->full_mask()) {
        fail(Errc::UnknownState, "subset outside frame '" + frame->id() + "'");
      }
      if (mass <= 0.0) {
        fail(Errc::InvalidMass,
             "non-positive mass on " + frame->subset_text(subset));
      }
      total += mass;
    }
    if (std::abs(total - 1.0) > kContractTol) {
      fail(Errc::InvalidMass,
           "masses sum to " + std::to_string(total) + ", expected 1");
    }
    return Bba(std::move(frame), std::move(masses), conflict);
  }

  // Normalizes arbitrary non-negative weights over subsets into a BBA.
  static Bba from_proportions(FramePtr frame,
                              const std::map<Subset, double>& raw) {
    double total = 0.0;
    for (const auto& [subset, w] : raw) {
      if (w < 0.0) fail(Errc::InvalidMass, "negative weight");
      (void)subset;
      total += w;
    }
    if (total <= 0.0) fail(Errc::InvalidMass, "weights sum to zero");
    std::map<Subset, double> m;
    for (const auto& [subset, w] : raw) {
      if (w > 0.0) m[subset] = w / total;
    }
    return finalize(frame, std::move(m), 0.0);
  }

  const FramePtr& frame() const { return frame_; }
  const std::map<Subset, double>& masses() const { return masses_; }
  double conflict() const { return conflict_; }

  double mass(Subset subset) const {
    auto it = masses_.find(subset);
    return it == masses_.end() ? 0.0 : it->second;
  }

  double theta_mass() const { return mass(frame_->full_mask()); }
  bool is_normalized() const { return conflict_ == 0.0; }

  bool is_vacuous() const {
    return conflict_ == 0.0 && masses_.size() == 1 &&
           masses_.begin()->first == frame_->full_mask();
  }

  bool is_bayesian() const {
    if (conflict_ != 0.0) return false;
    for (const auto& [subset, mass] : masses_) {
      (void)mass;
      if (subset_size(subset) != 1) return false;
    }
    return true;
  }

  // Sum of masses on focal sets contained in `subset`.
  double belief(Subset subset) const {
    double total = 0.0;
    for (const auto& [focal, mass] : masses_) {
      if ((focal & ~subset) == 0) total += mass;
    }
    return total;
  }

  // Sum of masses on focal sets intersecting `subset`.
  double plausibility(Subset subset) const {
    double total = 0.0;
    for (const auto& [focal, mass] : masses_) {
      if (focal & subset) total += mass;
    }
    return total;
  }

  double belief(const std::vector<std::string>& labels) const {
    return belief(frame_->subset_of(labels));
  }
  double plausibility(const std::vector<std::string>& labels) const {
    return plausibility(frame_->subset_of(labels));
  }

  // Pignistic probabilities per state: each focal set's mass is split
  // equally among its members and rescaled by 1/(1 - conflict).
  std::vector<double> pignistic() const {
    if (conflict_ >= 1.0 - kContractTol) {
      fail(Errc::TotalConflict, "pignistic transform of total conflict");
    }
    std::vector<double> p(frame_->size(), 0.0);
    const double scale = 1.0 / (1.0 - conflict_);
    for (const auto& [focal, mass] : masses_) {
      const double share = mass * scale / subset_size(focal);
      for (std::size_t i = 0; i < frame_->size(); ++i) {
        if (focal & (1u << i)) p[i] += share;
      }
    }
    return p;
  }

  // Collapses this BBA to the Bayesian BBA of its pignistic probabilities.
  Bba to_bayesian() const {
    auto p = pignistic();
    std::map<Subset, double> m;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] > 0.0) m[static_cast<Subset>(1u << i)] = p[i];
    }
    return finalize(frame_, std::move(m), 0.0);
  }

  // Combination-output path: prunes dust masses into the full frame and
  // checks conservation. Used by the combination rules and transports.
  static Bba finalize(FramePtr frame, std::map<Subset, double> masses,
                      double conflict) {
    const Subset theta = frame->full_mask();
    double dust = 0.0;
    for (auto it = masses.begin(); it != masses.end();) {
      if (it->second < kMassDust && it->first != theta) {
        dust += it->second;
        it = masses.erase(it);
      } else if (it->second <= 0.0) {
        it = masses.erase(it);
      } else {
        ++it;
      }
    }
    if (dust > 0.0) masses[theta] += dust;
    if (masses.empty() && conflict < 1.0 - kContractTol) {
      fail(Errc::InvalidMass, "combination produced no mass");
    }
    double total = conflict;
    for (const auto& [subset, mass] : masses) {
      (void)subset;
      total += mass;
    }
    if (std::abs(total - 1.0) > kContractTol) {
      fail(Errc::InvalidMass, "combination lost mass: total " +
                                  std::to_string(total));
    }
    return Bba(std::move(frame), std::move(masses), conflict);
  }

 private:
  Bba(FramePtr frame, std::map<Subset, double> masses, double conflict)
      : frame_(std::move(frame)),
        masses_(std::move(masses)),
        conflict_(conflict) {}

  FramePtr frame_;
  std::map<Subset, double> masses_;
  double conflict_;
};

inline std::size_t argmax_index(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace evinet
