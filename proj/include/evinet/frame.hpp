#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "evinet/errors.hpp"

namespace evinet {

// A subset of a frame's states, encoded as a bitmask over the state order.
// Bit i set means state i is in the subset. 0 is the empty set.
using Subset = std::uint32_t;

inline int subset_size(Subset s) { return std::popcount(s); }

// Finite set of mutually exclusive states for one variable.
class Frame {
 public:
  static constexpr std::size_t kMaxStates = 16;

  Frame(std::string id, std::vector<std::string> states,
        std::vector<std::string> state_descriptions = {})
      : id_(std::move(id)),
        states_(std::move(states)),
        state_descriptions_(std::move(state_descriptions)) {
    if (id_.empty()) fail(Errc::InvalidFrame, "frame id must be non-empty");
    if (states_.empty() || states_.size() > kMaxStates) {
      fail(Errc::InvalidFrame,
           "frame '" + id_ + "' must have between 1 and 16 states, got " +
               std::to_string(states_.size()));
    }
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i].empty()) {
        fail(Errc::InvalidFrame, "frame '" + id_ + "' has an empty state label");
      }
      for (std::size_t j = i + 1; j < states_.size(); ++j) {
        if (states_[i] == states_[j]) {
          fail(Errc::InvalidFrame,
               "frame '" + id_ + "' has duplicate state '" + states_[i] + "'");
        }
      }
    }
    if (!state_descriptions_.empty() &&
        state_descriptions_.size() != states_.size()) {
      fail(Errc::InvalidFrame,
           "frame '" + id_ + "' state descriptions must match state count");
    }
  }

  const std::string& id() const { return id_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& state_descriptions() const {
    return state_descriptions_;
  }

  Subset full_mask() const {
    return static_cast<Subset>((1u << states_.size()) - 1u);
  }

  bool has_state(std::string_view label) const {
    return std::find(states_.begin(), states_.end(), label) != states_.end();
  }

  std::size_t index_of(std::string_view label) const {
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i] == label) return i;
    }
    fail(Errc::UnknownState,
         "state '" + std::string(label) + "' not in frame '" + id_ + "'");
  }

  Subset singleton(std::string_view label) const {
    return static_cast<Subset>(1u << index_of(label));
  }

  Subset subset_of(const std::vector<std::string>& labels) const {
    Subset s = 0;
    for (const auto& l : labels) s |= singleton(l);
    return s;
  }

  // Labels of a subset in state-index order.
  std::vector<std::string> labels(Subset s) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (s & (1u << i)) out.push_back(states_[i]);
    }
    return out;
  }

  std::string subset_text(Subset s) const {
    if (s == 0) return "{}";
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (s & (1u << i)) {
        if (!first) out += ",";
        out += states_[i];
        first = false;
      }
    }
    return out + "}";
  }

 private:
  std::string id_;
  std::vector<std::string> states_;
  std::vector<std::string> state_descriptions_;
};

using FramePtr = std::shared_ptr<const Frame>;

inline FramePtr make_frame(std::string id, std::vector<std::string> states,
                           std::vector<std::string> state_descriptions = {}) {
  return std::make_shared<const Frame>(std::move(id), std::move(states),
                                       std::move(state_descriptions));
}

inline bool same_frame(const Frame& a, const Frame& b) {
  return a.id() == b.id() && a.states() == b.states();
}

inline void check_same_frame(const Frame& a, const Frame& b,
                             const char* where) {
  if (!same_frame(a, b)) {
    fail(Errc::FrameMismatch, std::string(where) + ": frame '" + a.id() +
                                  "' vs '" + b.id() + "'");
  }
}

}  // namespace evinet
