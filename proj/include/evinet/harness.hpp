#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "evinet/engine.hpp"
#include "evinet/providers.hpp"

namespace evinet {

struct AtomicFact {
  std::string text;
  std::string variable;
  std::string state;
  bool initial = false;  // pre-matched into the initial evidence
};

// One dialogue task: an underspecified query, the client-side facts, the
// hypothesis set, and the gold label. Documents ride along for construction.
struct CaseInstance {
  std::string id;
  std::string initial_query;
  std::vector<AtomicFact> facts;
  std::vector<std::string> hypotheses;
  std::string true_hypothesis;
  std::vector<Document> documents;
  std::vector<std::string> gold_documents;
};

inline void validate_case(const CaseInstance& instance,
                          const EvidentialNetwork& net) {
  if (std::find(instance.hypotheses.begin(), instance.hypotheses.end(),
                instance.true_hypothesis) == instance.hypotheses.end()) {
    fail(Errc::InvalidConfig, "case '" + instance.id +
                                  "': true hypothesis '" +
                                  instance.true_hypothesis +
                                  "' not in hypothesis list");
  }
  if (instance.hypotheses != net.hypothesis().frame->states()) {
    fail(Errc::InvalidConfig,
         "case '" + instance.id +
             "': hypothesis list does not match the network's hypothesis frame");
  }
  for (const auto& fact : instance.facts) {
    const Variable& var = net.variable(fact.variable);
    if (!var.frame->has_state(fact.state)) {
      fail(Errc::UnknownState, "case '" + instance.id + "': fact state '" +
                                   fact.state + "' not in frame of '" +
                                   fact.variable + "'");
    }
  }
  for (const auto& gold : instance.gold_documents) {
    const bool found =
        std::any_of(instance.documents.begin(), instance.documents.end(),
                    [&](const Document& d) { return d.id == gold; });
    if (!found) {
      fail(Errc::InvalidConfig, "case '" + instance.id + "': gold document '" +
                                    gold + "' not among documents");
    }
  }
}

inline OrderedJson case_to_json(const CaseInstance& instance) {
  OrderedJson j;
  j["version"] = 1;
  j["id"] = instance.id;
  j["initial_query"] = instance.initial_query;
  OrderedJson facts = OrderedJson::array();
  for (const auto& fact : instance.facts) {
    OrderedJson f;
    f["text"] = fact.text;
    f["variable"] = fact.variable;
    f["state"] = fact.state;
    f["initial"] = fact.initial;
    facts.push_back(std::move(f));
  }
  j["facts"] = std::move(facts);
  j["hypotheses"] = instance.hypotheses;
  j["true_hypothesis"] = instance.true_hypothesis;
  OrderedJson docs = OrderedJson::array();
  for (const auto& doc : instance.documents) {
    docs.push_back(OrderedJson{{"id", doc.id}, {"text", doc.text}});
  }
  j["documents"] = std::move(docs);
  j["gold_documents"] = instance.gold_documents;
  return j;
}

inline CaseInstance case_from_json(const Json& j) {
  CaseInstance instance;
  instance.id = require_field(j, "id", "case").get<std::string>();
  instance.initial_query = j.value("initial_query", std::string{});
  for (const auto& fj : require_field(j, "facts", "case")) {
    AtomicFact fact;
    fact.text = require_field(fj, "text", "fact").get<std::string>();
    fact.variable = require_field(fj, "variable", "fact").get<std::string>();
    fact.state = require_field(fj, "state", "fact").get<std::string>();
    fact.initial = fj.value("initial", false);
    instance.facts.push_back(std::move(fact));
  }
  instance.hypotheses =
      require_field(j, "hypotheses", "case").get<std::vector<std::string>>();
  instance.true_hypothesis =
      require_field(j, "true_hypothesis", "case").get<std::string>();
  if (j.contains("documents")) {
    for (const auto& dj : j["documents"]) {
      instance.documents.push_back(
          Document{require_field(dj, "id", "document").get<std::string>(),
                   dj.value("text", std::string{})});
    }
  }
  if (j.contains("gold_documents")) {
    instance.gold_documents =
        j["gold_documents"].get<std::vector<std::string>>();
  }
  return instance;
}

// JSON Lines, one case per line.
inline std::vector<CaseInstance> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open dataset '" + path + "'");
  std::vector<CaseInstance> dataset;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      dataset.push_back(case_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      fail(Errc::ParseError, "dataset '" + path + "' line " +
                                 std::to_string(line_no) + ": " + e.what());
    }
  }
  return dataset;
}

inline void save_dataset(const std::string& path,
                         const std::vector<CaseInstance>& dataset) {
  std::string body;
  for (const auto& instance : dataset) {
    body += case_to_json(instance).dump();
    body += '\n';
  }
  write_text_file(path, body);
}

// Deterministic stand-in for a simulated client: picks at most two facts
// whose target variable matches the asked one, in dataset order, and returns
// their texts. No matching fact means an empty answer.
class OracleClient : public DialogueClient {
 public:
  static constexpr const char* kFactSeparator = "; ";

  explicit OracleClient(const CaseInstance& instance) : case_(&instance) {}

  std::string answer(const std::string& target_id,
                     const std::string& question) override {
    (void)question;
    std::string joined;
    int used = 0;
    for (const auto& fact : case_->facts) {
      if (fact.variable != target_id) continue;
      if (used == 2) break;
      if (used > 0) joined += kFactSeparator;
      joined += fact.text;
      ++used;
    }
    return joined;
  }

 private:
  const CaseInstance* case_;
};

// Encodes oracle answers via the case's structured fact annotations: each
// returned fact text maps to a certain singleton on its annotated state;
// multiple facts fuse with the K-way Yager rule; an empty answer is vacuous.
class CaseFactEncoder : public AnswerEncoder {
 public:
  explicit CaseFactEncoder(const CaseInstance& instance) : case_(&instance) {}

  Bba encode(const std::string& answer_text, const FramePtr& frame) override {
    if (answer_text.empty()) return Bba::vacuous(frame);
    std::vector<Bba> parts;
    std::size_t start = 0;
    const std::string separator = OracleClient::kFactSeparator;
    while (start <= answer_text.size()) {
      const std::size_t split = answer_text.find(separator, start);
      const std::string piece =
          answer_text.substr(start, split == std::string::npos
                                        ? std::string::npos
                                        : split - start);
      parts.push_back(encode_fact(piece, frame));
      if (split == std::string::npos) break;
      start = split + separator.size();
    }
    return yager_combine_k(parts);
  }

 private:
  Bba encode_fact(const std::string& text, const FramePtr& frame) const {
    for (const auto& fact : case_->facts) {
      if (fact.text == text) {
        return Bba::categorical(frame, fact.state);
      }
    }
    fail(Errc::ProviderFailure,
         "answer '" + text + "' is not a fact of case '" + case_->id + "'");
  }

  const CaseInstance* case_;
};

// Evidence for facts flagged `initial`, fused per variable with Yager.
inline EvidenceAssignment initial_evidence_for(const CaseInstance& instance,
                                               const EvidentialNetwork& net) {
  EvidenceAssignment evidence;
  for (const auto& fact : instance.facts) {
    if (!fact.initial) continue;
    const Variable& var = net.variable(fact.variable);
    const Bba answer = Bba::categorical(var.frame, fact.state);
    if (const Bba* existing = evidence.find(fact.variable)) {
      evidence.local.insert_or_assign(fact.variable,
                                      yager_combine(*existing, answer));
    } else {
      evidence.local.emplace(fact.variable, answer);
    }
  }
  return evidence;
}

struct CaseResult {
  std::string case_id;
  bool decided = false;
  std::string hypothesis;
  bool correct = false;
  bool abstained = false;
  bool tie = false;
  int turns_used = 0;
  int turns_effective = 0;  // t_max for abstentions
  std::string error;
  std::string trace_file;
  Outcome outcome;
};

struct BenchmarkReport {
  double success_rate = 0.0;
  double mean_turns = 0.0;
  double abstention_rate = 0.0;
  EngineMode mode = EngineMode::evidential;
  bool full_disclosure = false;
  std::vector<CaseResult> cases;
};

struct BenchmarkOptions {
  bool full_disclosure = false;
  std::string trace_dir;  // per-case trace CSVs are written here if set
  QuestionPhrasing* phrasing = nullptr;
};

// Answers every observable the case has facts for (in sorted id order),
// then decides once from the fully-informed posterior.
inline Outcome run_full_disclosure(const Engine& engine,
                                   const CaseInstance& instance) {
  OracleClient client(instance);
  CaseFactEncoder encoder(instance);
  BeliefState state =
      engine.init_state(initial_evidence_for(instance, engine.network()));
  for (const auto& id : engine.network().observable_ids()) {
    const std::string answer_text = client.answer(id, {});
    if (answer_text.empty()) continue;
    const Bba answer =
        encoder.encode(answer_text, engine.network().variable(id).frame);
    state = engine.ingest_answer(std::move(state), id, answer,
                                 default_question(engine.network().variable(id)),
                                 answer_text);
  }
  const std::vector<double> betp =
      state.marginals.at(engine.network().root()).pignistic();
  const std::size_t best = argmax_index(betp);
  Outcome outcome;
  outcome.decided = betp[best] + kContractTol >= engine.config().tau_conf;
  if (outcome.decided) outcome.hypothesis = engine.hypotheses()[best];
  outcome.turns_used = state.turn;
  outcome.final_betp = betp;
  outcome.transcript = state.transcript;
  outcome.trace = state.trace;
  outcome.mode = engine.config().mode;
  return outcome;
}

// One dialogue per case against the deterministic oracle client; abstention
// counts as failure and contributes t_max turns to the mean dialogue length.
inline BenchmarkReport run_benchmark(const std::vector<CaseInstance>& dataset,
                                     const EvidentialNetwork& net,
                                     const EngineConfig& config,
                                     const BenchmarkOptions& options = {}) {
  if (dataset.empty()) fail(Errc::EmptyDataset, "benchmark dataset is empty");
  const Engine engine(net, config);
  BenchmarkReport report;
  report.mode = config.mode;
  report.full_disclosure = options.full_disclosure;

  TemplatePhrasing template_phrasing;
  QuestionPhrasing& phrasing =
      options.phrasing ? *options.phrasing : template_phrasing;

  int successes = 0;
  int abstentions = 0;
  double turn_sum = 0.0;
  for (const auto& instance : dataset) {
    validate_case(instance, net);
    CaseResult result;
    result.case_id = instance.id;
    try {
      if (options.full_disclosure) {
        result.outcome = run_full_disclosure(engine, instance);
      } else {
        OracleClient client(instance);
        CaseFactEncoder encoder(instance);
        result.outcome = engine.run_dialogue(
            client, encoder, phrasing, initial_evidence_for(instance, net));
      }
      result.decided = result.outcome.decided;
      result.hypothesis = result.outcome.hypothesis;
      result.tie = result.outcome.tie;
      result.turns_used = result.outcome.turns_used;
    } catch (const Engine::DialogueAborted& e) {
      result.error = e.what();
      result.outcome = e.partial;
      result.turns_used = e.partial.turns_used;
    } catch (const Error& e) {
      result.error = e.what();
    }
    result.abstained = !result.decided;
    result.correct =
        result.decided && result.hypothesis == instance.true_hypothesis;
    result.turns_effective =
        result.abstained ? config.t_max : result.turns_used;

    if (!options.trace_dir.empty() && !result.outcome.trace.empty()) {
      const std::string path =
          options.trace_dir + "/trace_" + instance.id + ".csv";
      write_text_file(path,
                      trace_to_csv(result.outcome.trace, instance.hypotheses,
                                   instance.true_hypothesis));
      result.trace_file = path;
    }

    successes += result.correct;
    abstentions += result.abstained;
    turn_sum += result.turns_effective;
    report.cases.push_back(std::move(result));
  }
  const double n = static_cast<double>(dataset.size());
  report.success_rate = successes / n;
  report.abstention_rate = abstentions / n;
  report.mean_turns = turn_sum / n;
  return report;
}

inline OrderedJson report_to_json(const BenchmarkReport& report,
                                  const EngineConfig& config) {
  OrderedJson j;
  j["version"] = 1;
  j["mode"] = mode_name(report.mode);
  j["full_disclosure"] = report.full_disclosure;
  OrderedJson cfg;
  cfg["tau_conf"] = config.tau_conf;
  cfg["t_max"] = config.t_max;
  cfg["epsilon_nonsp"] = config.epsilon_nonsp;
  cfg["hedge_mass"] = config.hedge_mass;
  j["config"] = std::move(cfg);
  j["n_cases"] = report.cases.size();
  j["success_rate"] = report.success_rate;
  j["mean_turns"] = report.mean_turns;
  j["abstention_rate"] = report.abstention_rate;
  OrderedJson cases = OrderedJson::array();
  for (const auto& c : report.cases) {
    OrderedJson cj;
    cj["id"] = c.case_id;
    cj["decided"] = c.decided;
    cj["hypothesis"] = c.hypothesis;
    cj["correct"] = c.correct;
    cj["abstained"] = c.abstained;
    cj["tie"] = c.tie;
    cj["turns_used"] = c.turns_used;
    cj["turns_effective"] = c.turns_effective;
    cj["error"] = c.error;
    // Relative to the report's own directory, so moving a run directory
    // (or rerunning into another one) keeps the report byte-identical.
    const std::size_t slash = c.trace_file.find_last_of('/');
    cj["trace_file"] = slash == std::string::npos
                           ? c.trace_file
                           : c.trace_file.substr(slash + 1);
    cases.push_back(std::move(cj));
  }
  j["cases"] = std::move(cases);
  return j;
}

inline std::string report_to_table(const BenchmarkReport& report) {
  std::ostringstream out;
  out << "cases          " << report.cases.size() << "\n";
  out << "mode           " << mode_name(report.mode)
      << (report.full_disclosure ? " (full disclosure)" : "") << "\n";
  out << "success_rate   " << number_text(report.success_rate) << "\n";
  out << "mean_turns     " << number_text(report.mean_turns) << "\n";
  out << "abstention     " << number_text(report.abstention_rate) << "\n";
  return out.str();
}

}  // namespace evinet
