#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "evinet/combine.hpp"
#include "evinet/entropy.hpp"
#include "evinet/propagate.hpp"
#include "evinet/providers.hpp"
#include "evinet/serialize.hpp"

namespace evinet {

enum class EngineMode { evidential, ig_bayesian };

inline const char* mode_name(EngineMode m) {
  return m == EngineMode::evidential ? "evidential" : "ig_bayesian";
}

inline EngineMode mode_from_name(const std::string& name) {
  if (name == "evidential") return EngineMode::evidential;
  if (name == "ig_bayesian") return EngineMode::ig_bayesian;
  fail(Errc::InvalidConfig, "unknown engine mode '" + name + "'");
}

struct EngineConfig {
  double tau_conf = 0.85;
  int t_max = 15;
  double epsilon_nonsp = 0.1;
  double hedge_mass = 0.7;
  EngineMode mode = EngineMode::evidential;

  void validate() const {
    if (!(tau_conf > 0.0 && tau_conf <= 1.0)) {
      fail(Errc::InvalidConfig, "tau_conf must be in (0,1]");
    }
    if (t_max < 1) fail(Errc::InvalidConfig, "t_max must be >= 1");
    if (epsilon_nonsp < 0.0) {
      fail(Errc::InvalidConfig, "epsilon_nonsp must be >= 0");
    }
    if (!(hedge_mass > 0.0 && hedge_mass < 1.0)) {
      fail(Errc::InvalidConfig, "hedge_mass must be in (0,1)");
    }
  }
};

struct TurnRecord {
  int turn = 0;
  std::string target;
  std::string question;
  std::string answer_text;
  Bba answer;
};

struct TraceRow {
  int turn = 0;
  std::vector<double> betp;  // over hypothesis states
  double e_d = 0.0;
  double nonspecificity = 0.0;
  double discord = 0.0;
  double conflict = 0.0;
};

struct BeliefState {
  int turn = 0;
  EvidenceAssignment local_evidence;
  Marginals marginals;
  std::set<std::string> asked;
  std::vector<TurnRecord> transcript;
  std::vector<TraceRow> trace;
};

struct QuestionScore {
  std::string target;
  double delta_nonsp = 0.0;
  double delta_disc = 0.0;
  std::vector<double> predictive;
};

enum class StopKind { decide, abstain, ask };

struct StopResult {
  StopKind kind = StopKind::ask;
  std::string hypothesis;
  bool tie = false;
};

struct Outcome {
  bool decided = false;
  std::string hypothesis;
  bool tie = false;
  int turns_used = 0;
  std::vector<double> final_betp;
  std::vector<TurnRecord> transcript;
  std::vector<TraceRow> trace;
  EngineMode mode = EngineMode::evidential;
};

inline bool has_singleton_support(const Bba& bba) {
  for (const auto& [subset, mass] : bba.masses()) {
    (void)mass;
    if (subset_size(subset) == 1) return true;
  }
  return false;
}

inline Bba uniform_bayesian(const FramePtr& frame) {
  std::map<Subset, double> masses;
  for (std::size_t i = 0; i < frame->size(); ++i) {
    masses[static_cast<Subset>(1u << i)] = 1.0;
  }
  return Bba::from_proportions(frame, masses);
}

// Point-probability reduction of a network: rows with singleton support
// collapse to their pignistic probabilities; rows whose focal sets are all
// non-singletons yield no extractable point values and default to uniform.
inline EvidentialNetwork collapse_to_bayesian(const EvidentialNetwork& source) {
  EvidentialNetwork net(source.hypothesis(), source.meta());
  for (const auto& [id, v] : source.variables()) {
    if (id != source.root()) net = add_variable(std::move(net), v);
  }
  for (const auto& e : source.edges()) {
    ConditionalBba edge;
    edge.parent = e.parent;
    edge.child = e.child;
    for (const auto& [state, row] : e.table) {
      edge.table.emplace(state, has_singleton_support(row)
                                    ? row.to_bayesian()
                                    : uniform_bayesian(row.frame()));
    }
    net = add_edge(std::move(net), std::move(edge));
  }
  return net;
}

// The interaction loop around one evidential network: scores candidate
// questions by expected Deng-entropy reduction under hypothetical answers,
// selects lexicographically, fuses real answers with Yager's rule, and stops
// on pignistic confidence or at the turn budget.
class Engine {
 public:
  Engine(EvidentialNetwork net, EngineConfig config = {})
      : config_(config),
        net_(config.mode == EngineMode::ig_bayesian
                 ? collapse_to_bayesian(net)
                 : std::move(net)) {
    config_.validate();
  }

  const EvidentialNetwork& network() const { return net_; }
  const EngineConfig& config() const { return config_; }

  const std::vector<std::string>& hypotheses() const {
    return net_.hypothesis().frame->states();
  }

  BeliefState init_state(const EvidenceAssignment& initial = {}) const {
    BeliefState state;
    for (const auto& [id, bba] : initial.local) {
      state.local_evidence.local.emplace(id, effective_evidence(bba));
    }
    state.marginals = propagate(net_, state.local_evidence);
    state.trace.push_back(make_trace_row(state));
    return state;
  }

  QuestionScore score_question(const BeliefState& state,
                               const std::string& target) const {
    const Variable& var = net_.variable(target);
    if (var.kind != VariableKind::observable) {
      fail(Errc::NotObservable, "'" + target + "' is not observable");
    }
    if (state.asked.count(target)) {
      fail(Errc::AlreadyAsked, "'" + target + "' was already answered");
    }
    const EntropyReport current =
        deng_entropy(state.marginals.at(net_.root()));
    QuestionScore score;
    score.target = target;
    score.predictive = state.marginals.at(target).pignistic();
    for (std::size_t i = 0; i < var.frame->size(); ++i) {
      const double weight = score.predictive[i];
      if (weight <= kAlgebraTol) continue;  // impossible answers carry no weight
      EvidenceAssignment hypothetical = state.local_evidence;
      const Bba answer =
          Bba::categorical(var.frame, static_cast<Subset>(1u << i));
      if (const Bba* existing = hypothetical.find(target)) {
        hypothetical.local.insert_or_assign(target,
                                            yager_combine(*existing, answer));
      } else {
        hypothetical.local.emplace(target, answer);
      }
      const Marginals marginals = propagate(net_, hypothetical);
      const EntropyReport posterior = deng_entropy(marginals.at(net_.root()));
      score.delta_nonsp +=
          weight * (current.nonspecificity - posterior.nonspecificity);
      score.delta_disc += weight * (current.discord - posterior.discord);
    }
    return score;
  }

  // Two-stage lexicographic choice: while nonspecificity at the hypothesis
  // node is at or above epsilon_nonsp, rank by (delta_nonsp, delta_disc),
  // afterwards by (delta_disc, delta_nonsp). Score comparisons use the
  // contract tolerance; full ties break toward the smaller variable id.
  std::optional<std::string> select_question(const BeliefState& state) const {
    std::vector<std::string> candidates;
    for (const auto& id : net_.observable_ids()) {
      if (!state.asked.count(id)) candidates.push_back(id);
    }
    if (candidates.empty()) return std::nullopt;
    const double current_nonsp =
        deng_entropy(state.marginals.at(net_.root())).nonspecificity;
    const bool nonsp_stage = current_nonsp >= config_.epsilon_nonsp;

    std::optional<QuestionScore> best;
    for (const auto& id : candidates) {
      QuestionScore score = score_question(state, id);
      if (!best) {
        best = std::move(score);
        continue;
      }
      const double primary = nonsp_stage ? score.delta_nonsp : score.delta_disc;
      const double secondary = nonsp_stage ? score.delta_disc : score.delta_nonsp;
      const double best_primary =
          nonsp_stage ? best->delta_nonsp : best->delta_disc;
      const double best_secondary =
          nonsp_stage ? best->delta_disc : best->delta_nonsp;
      if (primary > best_primary + kContractTol) {
        best = std::move(score);
      } else if (primary >= best_primary - kContractTol &&
                 secondary > best_secondary + kContractTol) {
        best = std::move(score);
      }
    }
    return best->target;
  }

  BeliefState ingest_answer(BeliefState state, const std::string& target,
                            const Bba& answer,
                            const std::string& question_text = {},
                            const std::string& answer_text = {}) const {
    const Variable& var = net_.variable(target);
    if (var.kind != VariableKind::observable) {
      fail(Errc::NotObservable, "'" + target + "' is not observable");
    }
    check_same_frame(*answer.frame(), *var.frame, "answer");
    const Bba effective = effective_evidence(answer);
    if (const Bba* existing = state.local_evidence.find(target)) {
      state.local_evidence.local.insert_or_assign(
          target, yager_combine(*existing, effective));
    } else {
      state.local_evidence.local.emplace(target, effective);
    }
    state.marginals = propagate(net_, state.local_evidence);
    state.turn += 1;
    state.asked.insert(target);
    TurnRecord record{state.turn, target, question_text, answer_text, effective};
    state.transcript.push_back(std::move(record));
    state.trace.push_back(make_trace_row(state));
    return state;
  }

  StopResult should_stop(const BeliefState& state) const {
    const std::vector<double> betp = state.marginals.at(net_.root()).pignistic();
    std::size_t best = argmax_index(betp);
    StopResult result;
    if (betp[best] + kContractTol >= config_.tau_conf) {
      result.kind = StopKind::decide;
      result.hypothesis = hypotheses()[best];
      for (std::size_t i = 0; i < betp.size(); ++i) {
        if (i != best && std::abs(betp[i] - betp[best]) <= kContractTol) {
          result.tie = true;
        }
      }
      return result;
    }
    if (state.turn >= config_.t_max) {
      result.kind = StopKind::abstain;
      return result;
    }
    bool any_candidate = false;
    for (const auto& id : net_.observable_ids()) {
      if (!state.asked.count(id)) {
        any_candidate = true;
        break;
      }
    }
    result.kind = any_candidate ? StopKind::ask : StopKind::abstain;
    return result;
  }

  Outcome run_dialogue(DialogueClient& client, AnswerEncoder& encoder,
                       QuestionPhrasing& phrasing,
                       const EvidenceAssignment& initial = {}) const {
    BeliefState state = init_state(initial);
    while (true) {
      const StopResult stop = should_stop(state);
      if (stop.kind != StopKind::ask) {
        return make_outcome(state, stop);
      }
      const std::optional<std::string> target = select_question(state);
      if (!target) {
        return make_outcome(state, StopResult{StopKind::abstain, {}, false});
      }
      try {
        const Variable& var = net_.variable(*target);
        const std::string question = phrasing.phrase(var);
        const std::string answer_text = client.answer(*target, question);
        const Bba answer = encoder.encode(answer_text, var.frame);
        state = ingest_answer(std::move(state), *target, answer, question,
                              answer_text);
      } catch (const Error& e) {
        throw DialogueAborted(e.code(), e.what(),
                              make_outcome(state, StopResult{}));
      }
    }
  }

  struct DialogueAborted : Error {
    DialogueAborted(Errc code, const std::string& message, Outcome partial)
        : Error(code, message), partial(std::move(partial)) {}
    Outcome partial;
  };

  Outcome snapshot_outcome(const BeliefState& state,
                           const StopResult& stop) const {
    return make_outcome(state, stop);
  }

 private:
  Bba effective_evidence(const Bba& bba) const {
    return config_.mode == EngineMode::ig_bayesian ? bba.to_bayesian() : bba;
  }

  TraceRow make_trace_row(const BeliefState& state) const {
    const Bba& marginal = state.marginals.at(net_.root());
    const EntropyReport entropy = deng_entropy(marginal);
    TraceRow row;
    row.turn = state.turn;
    row.betp = marginal.pignistic();
    row.e_d = entropy.total;
    row.nonspecificity = entropy.nonspecificity;
    row.discord = entropy.discord;
    row.conflict = state.marginals.total_conflict();
    return row;
  }

  Outcome make_outcome(const BeliefState& state, const StopResult& stop) const {
    Outcome outcome;
    outcome.decided = stop.kind == StopKind::decide;
    outcome.hypothesis = stop.hypothesis;
    outcome.tie = stop.tie;
    outcome.turns_used = state.turn;
    outcome.final_betp = state.marginals.at(net_.root()).pignistic();
    outcome.transcript = state.transcript;
    outcome.trace = state.trace;
    outcome.mode = config_.mode;
    return outcome;
  }

  EngineConfig config_;
  EvidentialNetwork net_;
};

// Maps terminal answers onto BBAs without a model: an exact state label is a
// certain singleton, "probably <label>" hedges onto that singleton, and
// "unknown" or an empty line is full ignorance.
class GrammarEncoder : public AnswerEncoder {
 public:
  explicit GrammarEncoder(double hedge_mass = 0.7) : hedge_mass_(hedge_mass) {}

  Bba encode(const std::string& answer_text, const FramePtr& frame) override {
    std::string text = trim(answer_text);
    if (text.empty() || text == "unknown") return Bba::vacuous(frame);
    constexpr const char* kProbably = "probably ";
    if (text.rfind(kProbably, 0) == 0) {
      const std::string label = trim(text.substr(std::string(kProbably).size()));
      if (!frame->has_state(label)) {
        fail(Errc::UnrecognizedAnswer,
             "no state '" + label + "' in frame '" + frame->id() + "'");
      }
      std::map<Subset, double> masses;
      masses[frame->singleton(label)] = hedge_mass_;
      masses[frame->full_mask()] += 1.0 - hedge_mass_;
      return Bba::from_masses(frame, std::move(masses));
    }
    if (!frame->has_state(text)) {
      fail(Errc::UnrecognizedAnswer,
           "answer '" + text + "' is not a state of frame '" + frame->id() +
               "'; expected a state label, 'probably <label>', or 'unknown'");
    }
    return Bba::categorical(frame, text);
  }

 private:
  static std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
  }

  double hedge_mass_;
};

// Shortest-round-trip decimal text for doubles, shared by every writer so
// repeated runs serialize identically.
inline std::string number_text(double value) { return OrderedJson(value).dump(); }

inline OrderedJson betp_to_json(const std::vector<double>& betp,
                                const std::vector<std::string>& hypotheses) {
  OrderedJson j;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    j[hypotheses[i]] = betp[i];
  }
  return j;
}

inline OrderedJson outcome_to_json(const Outcome& outcome,
                                   const std::vector<std::string>& hypotheses) {
  OrderedJson j;
  j["version"] = 1;
  j["mode"] = mode_name(outcome.mode);
  OrderedJson decision;
  decision["kind"] = outcome.decided ? "decide" : "abstain";
  if (outcome.decided) {
    decision["hypothesis"] = outcome.hypothesis;
    decision["tie"] = outcome.tie;
  }
  j["decision"] = std::move(decision);
  j["turns_used"] = outcome.turns_used;
  j["final_betp"] = betp_to_json(outcome.final_betp, hypotheses);
  OrderedJson transcript = OrderedJson::array();
  for (const auto& turn : outcome.transcript) {
    OrderedJson t;
    t["turn"] = turn.turn;
    t["target"] = turn.target;
    t["question"] = turn.question;
    t["answer"] = turn.answer_text;
    t["answer_bba"] = bba_to_json(turn.answer);
    transcript.push_back(std::move(t));
  }
  j["transcript"] = std::move(transcript);
  OrderedJson trace = OrderedJson::array();
  for (const auto& row : outcome.trace) {
    OrderedJson r;
    r["turn"] = row.turn;
    r["betp"] = betp_to_json(row.betp, hypotheses);
    r["e_d"] = row.e_d;
    r["nonspecificity"] = row.nonspecificity;
    r["discord"] = row.discord;
    r["conflict"] = row.conflict;
    trace.push_back(std::move(r));
  }
  j["trace"] = std::move(trace);
  return j;
}

// Per-turn confidence trace. `true_hypothesis` may be empty (interactive
// runs without a gold label); the betp_true column is then left blank.
inline std::string trace_to_csv(const std::vector<TraceRow>& trace,
                                const std::vector<std::string>& hypotheses,
                                const std::string& true_hypothesis = {}) {
  std::string csv = "turn,betp_true,betp_max,e_d,nonspecificity,discord,conflict\n";
  std::ptrdiff_t true_index = -1;
  if (!true_hypothesis.empty()) {
    auto it = std::find(hypotheses.begin(), hypotheses.end(), true_hypothesis);
    if (it != hypotheses.end()) true_index = it - hypotheses.begin();
  }
  for (const auto& row : trace) {
    const double betp_max = *std::max_element(row.betp.begin(), row.betp.end());
    csv += std::to_string(row.turn);
    csv += ',';
    if (true_index >= 0) csv += number_text(row.betp[true_index]);
    csv += ',';
    csv += number_text(betp_max);
    csv += ',';
    csv += number_text(row.e_d);
    csv += ',';
    csv += number_text(row.nonspecificity);
    csv += ',';
    csv += number_text(row.discord);
    csv += ',';
    csv += number_text(row.conflict);
    csv += '\n';
  }
  return csv;
}

}  // namespace evinet
