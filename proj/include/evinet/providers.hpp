#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "evinet/bba.hpp"
#include "evinet/errors.hpp"
#include "evinet/network.hpp"
#include "evinet/serialize.hpp"

namespace evinet {

struct Document {
  std::string id;
  std::string text;
};

// A piece of source text justifying one dependency.
struct EvidenceSnippet {
  std::string id;
  std::string text;
  std::string doc_id;
  std::string parent;
  std::string child;
  std::string parent_state;  // bound during elicitation
};

struct Proposal {
  Variable child;
  std::vector<EvidenceSnippet> snippets;
};

// Focal sets named by state labels with a partial mass allocation (sum <= 1).
using PartialMasses = std::vector<std::pair<std::vector<std::string>, double>>;

// The four narrow boundaries where a language model would sit, plus the
// dialogue client answering questions. Every implementation must be
// deterministic for reproducible runs, except the HTTP-backed one.
class ChildProposer {
 public:
  virtual ~ChildProposer() = default;
  virtual std::vector<Proposal> propose(
      const Variable& parent, const std::vector<Document>& passages) = 0;
};

class BbaElicitor {
 public:
  virtual ~BbaElicitor() = default;
  virtual PartialMasses elicit(const EvidenceSnippet& snippet,
                               const std::string& parent_state,
                               const FramePtr& child_frame) = 0;
};

class AnswerEncoder {
 public:
  virtual ~AnswerEncoder() = default;
  virtual Bba encode(const std::string& answer_text, const FramePtr& frame) = 0;
};

class QuestionPhrasing {
 public:
  virtual ~QuestionPhrasing() = default;
  virtual std::string phrase(const Variable& variable) = 0;
};

class DialogueClient {
 public:
  virtual ~DialogueClient() = default;
  virtual std::string answer(const std::string& target_id,
                             const std::string& question) = 0;
};

inline std::string default_question(const Variable& variable) {
  const std::string& subject =
      variable.description.empty() ? variable.id : variable.description;
  return "What is the value of " + subject + "?";
}

class TemplatePhrasing : public QuestionPhrasing {
 public:
  std::string phrase(const Variable& variable) override {
    return default_question(variable);
  }
};

// Validates a provider's partial mass map and completes it into a normalized
// BBA: focal sets must be singletons, pairs, or the full frame; any
// unallocated remainder lands on the full frame as residual ignorance.
inline Bba bba_from_partial_masses(const FramePtr& frame,
                                   const PartialMasses& parts) {
  if (parts.empty()) return Bba::vacuous(frame);
  std::map<Subset, double> masses;
  double total = 0.0;
  for (const auto& [labels, mass] : parts) {
    Subset subset = 0;
    for (const auto& label : labels) {
      if (!frame->has_state(label)) {
        fail(Errc::MalformedElicitation,
             "state '" + label + "' not in frame '" + frame->id() + "'");
      }
      subset |= frame->singleton(label);
    }
    if (subset == 0) {
      fail(Errc::MalformedElicitation, "empty focal set in elicitation");
    }
    if (!in_restricted_family(subset, *frame)) {
      fail(Errc::MalformedElicitation,
           "focal set " + frame->subset_text(subset) +
               " outside the singleton/pair/full-frame family");
    }
    if (mass <= 0.0 || mass > 1.0 + 1e-6) {
      fail(Errc::MalformedElicitation,
           "mass " + std::to_string(mass) + " outside (0,1]");
    }
    masses[subset] += mass;
    total += mass;
  }
  if (total > 1.0 + 1e-6) {
    fail(Errc::OverAllocatedMass,
         "elicited masses sum to " + std::to_string(total));
  }
  const Subset theta = frame->full_mask();
  if (total >= 1.0) {
    // Tiny overshoot within the 1e-6 slack; rescale instead of topping up.
    for (auto& [subset, mass] : masses) {
      (void)subset;
      mass /= total;
    }
  } else {
    masses[theta] += 1.0 - total;
  }
  return Bba::finalize(frame, std::move(masses), 0.0);
}

inline PartialMasses partial_masses_from_json(const Json& j) {
  PartialMasses parts;
  for (const auto& entry : j) {
    parts.emplace_back(
        require_field(entry, "set", "mass entry").get<std::vector<std::string>>(),
        require_field(entry, "mass", "mass entry").get<double>());
  }
  return parts;
}

inline OrderedJson partial_masses_to_json(const PartialMasses& parts) {
  OrderedJson j = OrderedJson::array();
  for (const auto& [labels, mass] : parts) {
    j.push_back(OrderedJson{{"set", labels}, {"mass", mass}});
  }
  return j;
}

// Deterministic fixture-backed implementation of all four provider
// contracts. Every answer is an exact-key lookup; a missing key is a
// FixtureMiss, never a silent default. The one exception is question
// phrasing, which falls back to a fixed template.
class ScriptedProvider : public ChildProposer,
                         public BbaElicitor,
                         public AnswerEncoder,
                         public QuestionPhrasing {
 public:
  static std::string elicitation_key(const std::string& snippet_id,
                                     const std::string& parent_state,
                                     const std::string& child_frame_id) {
    return snippet_id + "|" + parent_state + "|" + child_frame_id;
  }

  static std::string encoding_key(const std::string& frame_id,
                                  const std::string& answer_text) {
    return frame_id + "|" + answer_text;
  }

  static ScriptedProvider from_json(const Json& j) {
    if (j.value("version", 0) != 1) {
      fail(Errc::ParseError, "fixture must declare \"version\": 1");
    }
    ScriptedProvider provider;
    if (j.contains("proposals")) {
      for (const auto& [parent_id, list] : j["proposals"].items()) {
        std::vector<Proposal> proposals;
        for (const auto& pj : list) {
          Proposal p;
          p.child = variable_from_json(require_field(pj, "variable", "proposal"));
          if (pj.contains("snippets")) {
            for (const auto& sj : pj["snippets"]) {
              EvidenceSnippet s;
              s.id = require_field(sj, "id", "snippet").get<std::string>();
              s.text = sj.value("text", std::string{});
              s.doc_id = sj.value("doc", std::string{});
              s.parent = parent_id;
              s.child = p.child.id;
              p.snippets.push_back(std::move(s));
            }
          }
          proposals.push_back(std::move(p));
        }
        provider.proposals_.emplace(parent_id, std::move(proposals));
      }
    }
    if (j.contains("elicitations")) {
      for (const auto& [key, parts] : j["elicitations"].items()) {
        provider.elicitations_.emplace(key, partial_masses_from_json(parts));
      }
    }
    if (j.contains("encodings")) {
      for (const auto& [key, parts] : j["encodings"].items()) {
        provider.encodings_.emplace(key, partial_masses_from_json(parts));
      }
    }
    if (j.contains("phrasings")) {
      for (const auto& [key, text] : j["phrasings"].items()) {
        provider.phrasings_.emplace(key, text.get<std::string>());
      }
    }
    return provider;
  }

  static ScriptedProvider load(const std::string& path) {
    return from_json(read_json_file(path));
  }

  std::vector<Proposal> propose(const Variable& parent,
                                const std::vector<Document>& passages) override {
    (void)passages;  // replay fixtures are already grounded
    auto it = proposals_.find(parent.id);
    if (it == proposals_.end()) {
      fail(Errc::FixtureMiss, "no proposals for variable '" + parent.id + "'");
    }
    return it->second;
  }

  PartialMasses elicit(const EvidenceSnippet& snippet,
                       const std::string& parent_state,
                       const FramePtr& child_frame) override {
    const std::string key =
        elicitation_key(snippet.id, parent_state, child_frame->id());
    auto it = elicitations_.find(key);
    if (it == elicitations_.end()) {
      fail(Errc::FixtureMiss, "no elicitation for key '" + key + "'");
    }
    return it->second;
  }

  Bba encode(const std::string& answer_text, const FramePtr& frame) override {
    auto it = encodings_.find(encoding_key(frame->id(), answer_text));
    if (it == encodings_.end()) {
      if (answer_text.empty()) return Bba::vacuous(frame);
      fail(Errc::FixtureMiss, "no encoding for answer '" + answer_text +
                                  "' on frame '" + frame->id() + "'");
    }
    return bba_from_partial_masses(frame, it->second);
  }

  std::string phrase(const Variable& variable) override {
    auto it = phrasings_.find(variable.id);
    if (it == phrasings_.end()) return default_question(variable);
    return it->second;
  }

 private:
  std::map<std::string, std::vector<Proposal>> proposals_;
  std::map<std::string, PartialMasses> elicitations_;
  std::map<std::string, PartialMasses> encodings_;
  std::map<std::string, std::string> phrasings_;
};

}  // namespace evinet
