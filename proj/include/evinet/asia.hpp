#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "evinet/construct.hpp"
#include "evinet/harness.hpp"

namespace evinet {

// Deterministic synthetic benchmark in the spirit of the classic
// visit-Asia/tuberculosis diagnostic network: a ground-truth graph for
// structure recovery from perturbed text snippets, plus a singly connected
// dialogue network with a decidable case set and an ambiguity-laden variant.
struct AsiaOptions {
  int n_cases = 60;
  int distractors = 3;
};

struct AsiaBenchmark {
  Variable root;
  ConstructionLimits limits;
  EvidentialNetwork ground_truth;
  std::vector<Document> corpus;
  OrderedJson fixture_json;
  EvidentialNetwork dialogue_net;
  std::vector<CaseInstance> cases;
  EvidentialNetwork ambiguous_net;
  std::vector<CaseInstance> ambiguous_cases;
};

namespace detail {

class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  int uniform_int(int n) { return static_cast<int>(next() % n); }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& values) {
    return values[uniform_int(static_cast<int>(values.size()))];
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
      std::swap(values[i], values[uniform_int(i + 1)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

inline int sample_index(SeededRng& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double draw = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    draw -= weights[i];
    if (draw <= 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace detail

namespace asia {

inline FramePtr disorder_frame() {
  return make_frame(
      "disorder_states",
      {"tuberculosis", "lung_cancer", "bronchitis", "healthy"},
      {"active tuberculosis infection", "malignant lung tumor",
       "chronic bronchitis", "no respiratory disease"});
}

inline Variable disorder_variable() {
  return Variable{"disorder", disorder_frame(), VariableKind::hypothesis,
                  "underlying respiratory disorder"};
}

inline Variable travel_variable() {
  return Variable{"asia_travel",
                  make_frame("asia_travel_states", {"yes", "no"},
                             {"recent travel to a high-incidence region",
                              "no recent travel"}),
                  VariableKind::observable,
                  "recent travel to a region with endemic respiratory infection"};
}

inline Variable smoking_variable() {
  return Variable{"smoking",
                  make_frame("smoking_states", {"smoker", "non_smoker"},
                             {"long-term smoker", "never smoked"}),
                  VariableKind::observable, "long-term smoking habit"};
}

inline Variable lesion_variable() {
  return Variable{"lung_lesion",
                  make_frame("lung_lesion_states", {"present", "absent"}),
                  VariableKind::intermediate,
                  "focal lesion in the lung tissue"};
}

inline Variable airway_variable() {
  return Variable{"airway_irritation",
                  make_frame("airway_irritation_states", {"present", "absent"}),
                  VariableKind::intermediate,
                  "chronic irritation of the airways"};
}

inline Variable xray_variable() {
  return Variable{"xray_shadow",
                  make_frame("xray_shadow_states", {"abnormal", "normal"},
                             {"visible shadow on the chest film",
                              "clear chest film"}),
                  VariableKind::observable, "shadow on the chest x-ray film"};
}

inline Variable dyspnea_variable() {
  return Variable{"dyspnea",
                  make_frame("dyspnea_states", {"severe", "mild", "none"},
                             {"labored breathing at rest",
                              "shortness of breath on exertion",
                              "no breathing difficulty"}),
                  VariableKind::observable,
                  "shortness of breath reported by the patient"};
}

inline Variable cough_variable() {
  return Variable{"cough",
                  make_frame("cough_states", {"persistent", "occasional", "none"},
                             {"cough lasting for weeks",
                              "intermittent cough", "no cough"}),
                  VariableKind::observable, "cough pattern reported by the patient"};
}

inline Bba row(const FramePtr& frame, const PartialMasses& parts) {
  return bba_from_partial_masses(frame, parts);
}

// Conditional rows shared by the ground truth and the dialogue network.
inline std::map<std::string, PartialMasses> edge_partials(
    const std::string& parent, const std::string& child) {
  const std::string key = edge_key(parent, child);
  if (key == "disorder->asia_travel") {
    return {{"tuberculosis", {{{"yes"}, 0.9}}},
            {"lung_cancer", {{{"no"}, 0.85}}},
            {"bronchitis", {{{"no"}, 0.85}}},
            {"healthy", {{{"no"}, 0.9}}}};
  }
  if (key == "disorder->smoking") {
    return {{"tuberculosis", {}},
            {"lung_cancer", {{{"smoker"}, 0.85}}},
            {"bronchitis", {{{"smoker"}, 0.7}}},
            {"healthy", {{{"non_smoker"}, 0.65}}}};
  }
  if (key == "disorder->lung_lesion") {
    return {{"tuberculosis", {{{"present"}, 0.92}}},
            {"lung_cancer", {{{"present"}, 0.9}}},
            {"bronchitis", {{{"absent"}, 0.85}}},
            {"healthy", {{{"absent"}, 0.92}}}};
  }
  if (key == "disorder->airway_irritation") {
    return {{"tuberculosis", {{{"present"}, 0.5}}},
            {"lung_cancer", {{{"present"}, 0.45}}},
            {"bronchitis", {{{"present"}, 0.92}}},
            {"healthy", {{{"absent"}, 0.88}}}};
  }
  if (key == "lung_lesion->xray_shadow") {
    return {{"present", {{{"abnormal"}, 0.97}}},
            {"absent", {{{"normal"}, 0.95}}}};
  }
  if (key == "lung_lesion->dyspnea") {
    return {{"present", {{{"severe"}, 0.7}, {{"mild"}, 0.2}}},
            {"absent", {{{"none"}, 0.65}, {{"mild"}, 0.25}}}};
  }
  if (key == "airway_irritation->cough") {
    return {{"present", {{{"persistent"}, 0.88}}},
            {"absent", {{{"none"}, 0.65}, {{"occasional"}, 0.2}}}};
  }
  if (key == "airway_irritation->dyspnea") {
    return {{"present", {{{"severe"}, 0.35}, {{"mild"}, 0.35}}},
            {"absent", {{{"none"}, 0.5}}}};
  }
  if (key == "lung_lesion->cough") {  // plausible-but-wrong extra edge
    return {{"present", {{{"persistent"}, 0.5}}},
            {"absent", {{{"none"}, 0.4}}}};
  }
  fail(Errc::InvalidConfig, "no conditional partials for edge " + key);
}

// Replacement rows for the ambiguity-laden variant: the same structure, but
// the symptom observables are supported only through two-state disjunctions
// (no singleton support anywhere in those rows) and the x-ray is hedged, so
// group separation must lean on pair-set evidence.
inline std::map<std::string, PartialMasses> ambiguous_edge_partials(
    const std::string& parent, const std::string& child) {
  const std::string key = edge_key(parent, child);
  if (key == "lung_lesion->xray_shadow") {
    return {{"present", {{{"abnormal"}, 0.7}}},
            {"absent", {{{"normal"}, 0.65}}}};
  }
  if (key == "lung_lesion->dyspnea") {
    return {{"present", {{{"severe", "mild"}, 0.9}}},
            {"absent", {{{"mild", "none"}, 0.9}}}};
  }
  if (key == "airway_irritation->cough") {
    return {{"present", {{{"persistent", "occasional"}, 0.88}}},
            {"absent", {{{"occasional", "none"}, 0.88}}}};
  }
  return edge_partials(parent, child);
}

inline ConditionalBba make_edge(
    const EvidentialNetwork& net, const std::string& parent,
    const std::string& child,
    const std::map<std::string, PartialMasses>& partials) {
  ConditionalBba edge;
  edge.parent = parent;
  edge.child = child;
  const FramePtr child_frame = net.variable(child).frame;
  for (const auto& [state, parts] : partials) {
    edge.table.emplace(state, row(child_frame, parts));
  }
  return edge;
}

inline const std::vector<std::pair<std::string, std::string>>&
ground_truth_edges() {
  static const std::vector<std::pair<std::string, std::string>> edges = {
      {"disorder", "asia_travel"},      {"disorder", "smoking"},
      {"disorder", "lung_lesion"},      {"disorder", "airway_irritation"},
      {"lung_lesion", "xray_shadow"},   {"lung_lesion", "dyspnea"},
      {"airway_irritation", "dyspnea"}, {"airway_irritation", "cough"}};
  return edges;
}

inline EvidentialNetwork build_network(
    const std::vector<std::pair<std::string, std::string>>& edges,
    bool ambiguous) {
  NetworkMeta meta;
  EvidentialNetwork net(disorder_variable(), meta);
  for (const auto& v :
       {travel_variable(), smoking_variable(), lesion_variable(),
        airway_variable(), xray_variable(), dyspnea_variable(),
        cough_variable()}) {
    net = add_variable(std::move(net), v);
  }
  for (const auto& [parent, child] : edges) {
    const auto partials = ambiguous ? ambiguous_edge_partials(parent, child)
                                    : edge_partials(parent, child);
    net = add_edge(std::move(net), make_edge(net, parent, child, partials));
  }
  return net;
}

inline EvidentialNetwork ground_truth_network() {
  return build_network(ground_truth_edges(), false);
}

// The dialogue network drops the second parent of dyspnea so the graph is
// singly connected and supports exact propagation.
inline EvidentialNetwork dialogue_network(bool ambiguous) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : ground_truth_edges()) {
    if (e.first == "airway_irritation" && e.second == "dyspnea") continue;
    edges.push_back(e);
  }
  return build_network(edges, ambiguous);
}

inline std::string fact_text(const std::string& variable,
                             const std::string& state) {
  const std::string key = variable + ":" + state;
  if (key == "asia_travel:yes")
    return "The patient recently traveled to a region where tuberculosis is endemic.";
  if (key == "asia_travel:no")
    return "The patient has not traveled anywhere recently.";
  if (key == "smoking:smoker")
    return "The patient has smoked a pack a day for many years.";
  if (key == "smoking:non_smoker")
    return "The patient has never smoked.";
  if (key == "xray_shadow:abnormal")
    return "The chest film shows a distinct shadow.";
  if (key == "xray_shadow:normal")
    return "The chest film looks completely clear.";
  if (key == "dyspnea:severe")
    return "Breathing is severely labored even at rest.";
  if (key == "dyspnea:mild")
    return "There is slight shortness of breath on exertion.";
  if (key == "dyspnea:none")
    return "Breathing is unremarkable.";
  if (key == "cough:persistent")
    return "A persistent cough has lasted for several weeks.";
  if (key == "cough:occasional")
    return "An occasional cough appears now and then.";
  if (key == "cough:none")
    return "No cough is present.";
  fail(Errc::InvalidConfig, "no fact text for " + key);
}

struct SnippetPhrasings {
  std::string edge;
  std::vector<std::string> variants;
};

inline const std::vector<SnippetPhrasings>& snippet_phrasings() {
  static const std::vector<SnippetPhrasings> phrasings = {
      {"disorder->asia_travel",
       {"Patients whose respiratory disorder is tuberculosis frequently "
        "report recent travel to regions where the infection is endemic.",
        "A history of travel to high-incidence regions is common when the "
        "underlying respiratory disorder turns out to be tuberculosis.",
        "Tuberculosis cases often follow journeys through areas where the "
        "disease remains widespread; other respiratory disorders show no "
        "such travel link."}},
      {"disorder->smoking",
       {"Long-term smoking is strongly associated with lung cancer and, to a "
        "lesser degree, chronic bronchitis among respiratory disorders.",
        "Among patients with a respiratory disorder, heavy smokers are "
        "disproportionately diagnosed with lung cancer or bronchitis.",
        "A pack-a-day habit raises the likelihood that the respiratory "
        "disorder is a malignancy or chronic bronchitis."}},
      {"disorder->lung_lesion",
       {"Both tuberculosis and lung cancer typically produce a focal lesion "
        "in the lung tissue, while bronchitis rarely does.",
        "A respiratory disorder such as tuberculosis or a lung tumor tends "
        "to leave a visible lesion in the lung parenchyma.",
        "Focal lung lesions accompany tuberculosis and malignant disease far "
        "more often than uncomplicated bronchitis."}},
      {"disorder->airway_irritation",
       {"Chronic bronchitis is defined by persistent irritation of the "
        "airways; other respiratory disorders inflame them less reliably.",
        "Airway irritation is the hallmark of bronchitis and appears "
        "inconsistently in tuberculosis or cancer.",
        "When the respiratory disorder is bronchitis the airways are almost "
        "always irritated."}},
      {"lung_lesion->xray_shadow",
       {"A lesion in the lung tissue casts a shadow on the chest x-ray film "
        "in nearly every exposure.",
        "Chest films show an abnormal shadow when a lung lesion is present "
        "and stay clear otherwise.",
        "Radiographs almost always reveal a shadow over a lung lesion."}},
      {"lung_lesion->dyspnea",
       {"Patients with a lung lesion usually report severe shortness of "
        "breath, occasionally only a mild one.",
        "A lesion in the lung commonly causes labored breathing; without "
        "one, breathing difficulty is rare.",
        "Shortness of breath, often severe, accompanies lung lesions."}},
      {"airway_irritation->dyspnea",
       {"Irritated airways can also leave patients short of breath, from "
        "mild to severe.",
        "Breathing difficulty sometimes traces back to airway irritation "
        "rather than a lesion."}},
      {"airway_irritation->cough",
       {"Airway irritation produces a persistent cough in most patients.",
        "A cough that lasts for weeks is the usual sign of irritated "
        "airways; without irritation the cough fades.",
        "Persistent coughing strongly suggests airway irritation."}},
      {"lung_lesion->cough",
       {"Some clinicians report that lung lesions themselves provoke a "
        "lingering cough."}},
  };
  return phrasings;
}

inline const std::vector<std::string>& distractor_sentences() {
  static const std::vector<std::string> sentences = {
      "The clinic cafeteria was repainted last spring.",
      "Parking fees at the hospital doubled this year.",
      "The waiting room subscribes to three gardening magazines.",
      "A new coffee machine was installed near the east entrance.",
  };
  return sentences;
}

}  // namespace asia

inline AsiaBenchmark generate_asia_benchmark(std::uint64_t seed,
                                             AsiaOptions options = {}) {
  detail::SeededRng rng(seed);
  AsiaBenchmark bench{asia::disorder_variable(),
                      ConstructionLimits{},
                      asia::ground_truth_network(),
                      {},
                      {},
                      asia::dialogue_network(false),
                      {},
                      asia::dialogue_network(true),
                      {}};

  // Seeded structural noise, the desk-scale counterpart of imperfect
  // recovery: sometimes the weaker dyspnea dependency goes unsupported,
  // sometimes a plausible-but-wrong edge picks up a stray snippet.
  const bool drop_v_edge = rng.chance(0.35);
  const bool extra_edge = rng.chance(0.3);

  struct EdgePlan {
    std::string parent;
    std::string child;
    std::vector<std::string> snippet_ids;
  };
  std::vector<EdgePlan> planned_edges;
  for (const auto& [parent, child] : asia::ground_truth_edges()) {
    planned_edges.push_back({parent, child, {}});
  }
  if (extra_edge) planned_edges.push_back({"lung_lesion", "cough", {}});

  // Corpus: one perturbed snippet document per supported edge (two for the
  // lesion edge), plus irrelevant distractor documents.
  OrderedJson elicitations;
  std::map<std::string, std::vector<EvidenceSnippet>> edge_snippets;
  int doc_counter = 0;
  for (auto& plan : planned_edges) {
    const std::string key = edge_key(plan.parent, plan.child);
    if (drop_v_edge && key == "airway_irritation->dyspnea") continue;
    const asia::SnippetPhrasings* phrasings = nullptr;
    for (const auto& p : asia::snippet_phrasings()) {
      if (p.edge == key) phrasings = &p;
    }
    const int snippet_count = key == "disorder->lung_lesion" ? 2 : 1;
    for (int k = 0; k < snippet_count; ++k) {
      std::string text = rng.pick(phrasings->variants);
      if (rng.chance(0.5)) {
        text += " " + rng.pick(asia::distractor_sentences());
      }
      const std::string doc_id =
          "doc_" + std::to_string(100 + doc_counter++);
      bench.corpus.push_back(Document{doc_id, text});
      EvidenceSnippet snippet;
      snippet.id = "snip_" + key + "_" + std::to_string(k);
      snippet.text = text;
      snippet.doc_id = doc_id;
      snippet.parent = plan.parent;
      snippet.child = plan.child;
      edge_snippets[key].push_back(snippet);
      plan.snippet_ids.push_back(snippet.id);

      const auto partials = asia::edge_partials(plan.parent, plan.child);
      const std::string child_frame_id =
          bench.ground_truth.variable(plan.child).frame->id();
      for (const auto& [state, parts] : partials) {
        elicitations[ScriptedProvider::elicitation_key(snippet.id, state,
                                                       child_frame_id)] =
            partial_masses_to_json(parts);
      }
    }
  }
  for (int d = 0; d < options.distractors; ++d) {
    bench.corpus.push_back(Document{
        "doc_off_" + std::to_string(d),
        asia::distractor_sentences()[d % asia::distractor_sentences().size()] +
            " Visitors are asked to sign in at the front desk."});
  }

  // Scripted proposer fixture: true children per parent, distractor
  // proposals without snippet support, empty lists for the leaves.
  const std::vector<Variable> distractor_vars = {
      Variable{"pet_ownership", make_frame("pet_ownership_states", {"yes", "no"}),
               VariableKind::observable, "whether the patient owns pets"},
      Variable{"commute_distance",
               make_frame("commute_distance_states", {"long", "short"}),
               VariableKind::observable, "length of the daily commute"},
      Variable{"favorite_season",
               make_frame("favorite_season_states", {"summer", "winter"}),
               VariableKind::observable, "the season the patient prefers"},
      Variable{"handedness", make_frame("handedness_states", {"left", "right"}),
               VariableKind::observable, "dominant hand of the patient"},
  };

  const std::map<std::string, Variable> variable_pool = {
      {"asia_travel", asia::travel_variable()},
      {"smoking", asia::smoking_variable()},
      {"lung_lesion", asia::lesion_variable()},
      {"airway_irritation", asia::airway_variable()},
      {"xray_shadow", asia::xray_variable()},
      {"dyspnea", asia::dyspnea_variable()},
      {"cough", asia::cough_variable()},
  };

  auto proposal_json = [&](const Variable& child,
                           const std::vector<EvidenceSnippet>& snippets) {
    OrderedJson p;
    p["variable"] = variable_to_json(child);
    OrderedJson sj = OrderedJson::array();
    for (const auto& s : snippets) {
      sj.push_back(OrderedJson{{"id", s.id}, {"text", s.text}, {"doc", s.doc_id}});
    }
    p["snippets"] = std::move(sj);
    return p;
  };

  OrderedJson proposals;
  std::map<std::string, std::vector<std::string>> children_of;
  for (const auto& plan : planned_edges) {
    children_of[plan.parent].push_back(plan.child);
  }
  std::vector<std::string> expandable = {"disorder", "lung_lesion",
                                         "airway_irritation"};
  int distractor_cursor = 0;
  for (const auto& parent : expandable) {
    OrderedJson list = OrderedJson::array();
    for (const auto& child : children_of[parent]) {
      const std::string key = edge_key(parent, child);
      auto it = edge_snippets.find(key);
      const std::vector<EvidenceSnippet> snippets =
          it == edge_snippets.end() ? std::vector<EvidenceSnippet>{}
                                    : it->second;
      list.push_back(proposal_json(variable_pool.at(child), snippets));
    }
    if (parent == "disorder") {
      for (int d = 0; d < options.distractors; ++d) {
        const Variable& distractor =
            distractor_vars[distractor_cursor++ % distractor_vars.size()];
        const int position = rng.uniform_int(static_cast<int>(list.size()) + 1);
        list.insert(list.begin() + position, proposal_json(distractor, {}));
      }
    }
    proposals[parent] = std::move(list);
  }
  for (const auto& leaf :
       {"asia_travel", "smoking", "xray_shadow", "dyspnea", "cough"}) {
    proposals[leaf] = OrderedJson::array();
  }

  OrderedJson phrasings;
  phrasings["asia_travel"] =
      "Have you recently traveled to a region where tuberculosis is common?";
  phrasings["smoking"] = "Do you smoke, or have you smoked for a long time?";
  phrasings["xray_shadow"] = "Does the chest x-ray film show any shadow?";
  phrasings["dyspnea"] = "How short of breath do you feel?";
  phrasings["cough"] = "What kind of cough, if any, do you have?";

  OrderedJson encodings;
  for (const auto& [var_id, var] : variable_pool) {
    if (var.kind != VariableKind::observable) continue;
    for (const auto& state : var.frame->states()) {
      OrderedJson entry = OrderedJson::array();
      entry.push_back(OrderedJson{{"set", std::vector<std::string>{state}},
                                  {"mass", 1.0}});
      encodings[ScriptedProvider::encoding_key(
          var.frame->id(), asia::fact_text(var_id, state))] = std::move(entry);
    }
  }

  bench.fixture_json["version"] = 1;
  bench.fixture_json["proposals"] = std::move(proposals);
  bench.fixture_json["elicitations"] = std::move(elicitations);
  bench.fixture_json["encodings"] = std::move(encodings);
  bench.fixture_json["phrasings"] = std::move(phrasings);

  bench.limits = ConstructionLimits{};

  // Decidable dialogue cases: observable states are sampled consistently
  // with the generative chain, and a case is kept only if answering every
  // question drives the true hypothesis past the confidence threshold.
  auto generate_cases = [&](const EvidentialNetwork& net,
                            const std::string& id_prefix) {
    const Engine engine(net, EngineConfig{});
    std::vector<CaseInstance> cases;
    const std::vector<std::string>& hypotheses =
        net.hypothesis().frame->states();
    int attempts = 0;
    const int max_attempts = options.n_cases * 60;
    while (static_cast<int>(cases.size()) < options.n_cases &&
           attempts < max_attempts) {
      const std::string truth =
          hypotheses[static_cast<int>(cases.size()) % hypotheses.size()];
      ++attempts;

      auto sample_state = [&](const std::string& parent,
                              const std::string& parent_state,
                              const std::string& child) {
        const Bba& r = net.find_edge(parent, child)->row(parent_state);
        const std::vector<double> p = r.pignistic();
        const int index = detail::sample_index(rng, p);
        return r.frame()->states()[index];
      };

      const std::string lesion = sample_state("disorder", truth, "lung_lesion");
      const std::string airway =
          sample_state("disorder", truth, "airway_irritation");
      std::map<std::string, std::string> observed;
      observed["asia_travel"] = sample_state("disorder", truth, "asia_travel");
      observed["smoking"] = sample_state("disorder", truth, "smoking");
      observed["xray_shadow"] =
          sample_state("lung_lesion", lesion, "xray_shadow");
      observed["dyspnea"] = sample_state("lung_lesion", lesion, "dyspnea");
      observed["cough"] = sample_state("airway_irritation", airway, "cough");

      CaseInstance instance;
      instance.id = id_prefix + "_" + std::to_string(cases.size());
      instance.initial_query =
          "I have been feeling unwell with some breathing trouble lately; "
          "can you work out what is wrong?";
      instance.hypotheses = hypotheses;
      instance.true_hypothesis = truth;
      for (const auto& [variable, state] : observed) {
        instance.facts.push_back(
            AtomicFact{asia::fact_text(variable, state), variable, state});
      }
      rng.shuffle(instance.facts);
      instance.documents = bench.corpus;
      for (const auto& doc : bench.corpus) {
        if (doc.id.rfind("doc_off_", 0) != 0) {
          instance.gold_documents.push_back(doc.id);
        }
      }

      const Outcome full = run_full_disclosure(engine, instance);
      if (!full.decided || full.hypothesis != truth) continue;
      cases.push_back(std::move(instance));
    }
    if (static_cast<int>(cases.size()) < options.n_cases) {
      fail(Errc::InvalidConfig,
           "case generation exhausted its attempt budget for prefix '" +
               id_prefix + "'");
    }
    return cases;
  };

  bench.cases = generate_cases(
      bench.dialogue_net, "asia_" + std::to_string(seed));
  bench.ambiguous_cases = generate_cases(
      bench.ambiguous_net, "asia_amb_" + std::to_string(seed));
  return bench;
}

}  // namespace evinet
