#include <catch2/catch_amalgamated.hpp>

#include "evinet/engine.hpp"
#include "evinet/serialize.hpp"
#include "support/test_support.hpp"

using namespace evinet;
using Catch::Approx;

namespace {

const FramePtr kHyp = make_frame("hyp", {"h1", "h2"});
const FramePtr kBin = make_frame("obs_bin", {"o1", "o2"});

// Two-hypothesis network with one perfectly discriminating observable and
// one whose rows are identical across parent states.
EvidentialNetwork two_observable_net() {
  EvidentialNetwork net(
      Variable{"H", kHyp, VariableKind::hypothesis, "hypothesis"});
  const FramePtr fa = make_frame("fa", {"a1", "a2"});
  const FramePtr fb = make_frame("fb", {"b1", "b2"});
  net = add_variable(net, Variable{"a_discriminating", fa,
                                   VariableKind::observable, "decisive sign"});
  net = add_variable(net, Variable{"b_uninformative", fb,
                                   VariableKind::observable, "useless sign"});
  ConditionalBba discriminating;
  discriminating.parent = "H";
  discriminating.child = "a_discriminating";
  discriminating.table = {{"h1", Bba::categorical(fa, 1u)},
                          {"h2", Bba::categorical(fa, 2u)}};
  ConditionalBba uninformative;
  uninformative.parent = "H";
  uninformative.child = "b_uninformative";
  const Bba same_row = Bba::from_masses(fb, {{1u, 0.5}, {3u, 0.5}});
  uninformative.table = {{"h1", same_row}, {"h2", same_row}};
  net = add_edge(net, discriminating);
  net = add_edge(net, uninformative);
  return net;
}

EvidenceAssignment uniform_prior(const EvidentialNetwork& net) {
  EvidenceAssignment evidence;
  evidence.local.emplace(
      net.root(),
      Bba::from_masses(net.hypothesis().frame, {{1u, 0.5}, {2u, 0.5}}));
  return evidence;
}

// Independent reimplementation of the hypothetical-answer loop, built
// directly on propagate/yager/deng rather than Engine::score_question.
std::pair<double, double> naive_score(const EvidentialNetwork& net,
                                      const EvidenceAssignment& evidence,
                                      const std::string& target) {
  const Marginals current = propagate(net, evidence);
  const EntropyReport now = deng_entropy(current.at(net.root()));
  const std::vector<double> weights = current.at(target).pignistic();
  const FramePtr frame = net.variable(target).frame;
  double dn = 0.0;
  double dd = 0.0;
  for (std::size_t i = 0; i < frame->size(); ++i) {
    if (weights[i] <= 1e-12) continue;
    EvidenceAssignment hyp = evidence;
    const Bba answer = Bba::categorical(frame, static_cast<Subset>(1u << i));
    if (auto it = hyp.local.find(target); it != hyp.local.end()) {
      it->second = yager_combine(it->second, answer);
    } else {
      hyp.local.emplace(target, answer);
    }
    const EntropyReport then =
        deng_entropy(propagate(net, hyp).at(net.root()));
    dn += weights[i] * (now.nonspecificity - then.nonspecificity);
    dd += weights[i] * (now.discord - then.discord);
  }
  return {dn, dd};
}

class FixedAnswerClient : public DialogueClient {
 public:
  explicit FixedAnswerClient(std::map<std::string, std::string> answers)
      : answers_(std::move(answers)) {}
  std::string answer(const std::string& target, const std::string&) override {
    auto it = answers_.find(target);
    return it == answers_.end() ? std::string{} : it->second;
  }

 private:
  std::map<std::string, std::string> answers_;
};

class LabelEncoder : public AnswerEncoder {
 public:
  Bba encode(const std::string& text, const FramePtr& frame) override {
    if (text.empty()) return Bba::vacuous(frame);
    return Bba::categorical(frame, text);
  }
};

}  // namespace

TEST_CASE("question scoring on the two-observable fixture") {
  const EvidentialNetwork net = two_observable_net();
  const Engine engine(net, EngineConfig{});
  const BeliefState state = engine.init_state(uniform_prior(net));

  const QuestionScore good = engine.score_question(state, "a_discriminating");
  REQUIRE(good.delta_disc == Approx(1.0).margin(1e-9));
  REQUIRE(good.delta_nonsp == Approx(0.0).margin(1e-9));
  REQUIRE(good.predictive[0] == Approx(0.5).margin(1e-9));

  const QuestionScore bad = engine.score_question(state, "b_uninformative");
  REQUIRE(bad.delta_disc == Approx(0.0).margin(1e-9));
  REQUIRE(bad.delta_nonsp == Approx(0.0).margin(1e-9));

  REQUIRE(engine.select_question(state) == "a_discriminating");
}

TEST_CASE("scoring errors") {
  const EvidentialNetwork net = two_observable_net();
  const Engine engine(net, EngineConfig{});
  BeliefState state = engine.init_state(uniform_prior(net));
  REQUIRE_THROWS_MATCHES(engine.score_question(state, "H"), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::NotObservable;
                         }));
  state = engine.ingest_answer(std::move(state), "a_discriminating",
                               Bba::categorical(net.variable("a_discriminating").frame, 1u));
  REQUIRE_THROWS_MATCHES(engine.score_question(state, "a_discriminating"),
                         Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::AlreadyAsked;
                         }));
}

TEST_CASE("selection ties break toward the smaller variable id") {
  EvidentialNetwork net(
      Variable{"H", kHyp, VariableKind::hypothesis, "hypothesis"});
  for (const std::string id : {"obs_b", "obs_a"}) {
    net = add_variable(
        net, Variable{id, make_frame("f_" + id, {"o1", "o2"}),
                      VariableKind::observable, id});
    ConditionalBba edge;
    edge.parent = "H";
    edge.child = id;
    const FramePtr f = net.variable(id).frame;
    edge.table = {{"h1", Bba::categorical(f, 1u)},
                  {"h2", Bba::categorical(f, 2u)}};
    net = add_edge(net, edge);
  }
  const Engine engine(net, EngineConfig{});
  const BeliefState state = engine.init_state(uniform_prior(net));
  REQUIRE(engine.select_question(state) == "obs_a");
}

TEST_CASE("select_question matches exhaustive rescoring on random networks") {
  evitest::Rng rng(79);
  int checked = 0;
  while (checked < 50) {
    const EvidentialNetwork net = evitest::random_bayesian_polytree(rng, 5);
    if (net.observable_ids().empty()) continue;
    const Engine engine(net, EngineConfig{});
    EvidenceAssignment prior;
    prior.local.emplace(net.root(),
                        evitest::random_bayesian_bba(rng, net.hypothesis().frame));
    const BeliefState state = engine.init_state(prior);

    const double current_nonsp =
        deng_entropy(state.marginals.at(net.root())).nonspecificity;
    const bool nonsp_stage = current_nonsp >= engine.config().epsilon_nonsp;
    std::string best_id;
    double best_primary = 0.0;
    double best_secondary = 0.0;
    for (const auto& id : net.observable_ids()) {
      const auto [dn, dd] = naive_score(net, state.local_evidence, id);
      const QuestionScore score = engine.score_question(state, id);
      REQUIRE(score.delta_nonsp == Approx(dn).margin(1e-9));
      REQUIRE(score.delta_disc == Approx(dd).margin(1e-9));
      const double primary = nonsp_stage ? dn : dd;
      const double secondary = nonsp_stage ? dd : dn;
      if (best_id.empty() || primary > best_primary + 1e-9 ||
          (primary >= best_primary - 1e-9 && secondary > best_secondary + 1e-9)) {
        best_id = id;
        best_primary = primary;
        best_secondary = secondary;
      }
    }
    REQUIRE(engine.select_question(state).value() == best_id);
    ++checked;
  }
}

TEST_CASE("selection is invariant to rescaled predictive weights") {
  // The predictive weights are a pignistic distribution; scaling them by a
  // positive constant and renormalizing must leave every delta, and hence
  // the selected question, unchanged.
  const EvidentialNetwork net = two_observable_net();
  const Engine engine(net, EngineConfig{});
  const BeliefState state = engine.init_state(uniform_prior(net));
  const std::string chosen = engine.select_question(state).value();
  const Marginals current = propagate(net, state.local_evidence);
  const EntropyReport now = deng_entropy(current.at(net.root()));
  for (double scale : {0.01, 3.0, 250.0}) {
    std::string best;
    double best_primary = -1e300;
    for (const auto& id : net.observable_ids()) {
      const QuestionScore score = engine.score_question(state, id);
      std::vector<double> weights = score.predictive;
      double total = 0.0;
      for (double& w : weights) {
        w *= scale;
        total += w;
      }
      for (double& w : weights) w /= total;
      // Recompute the stage-2 primary key from the rescaled weights.
      double delta = 0.0;
      const FramePtr frame = net.variable(id).frame;
      for (std::size_t i = 0; i < frame->size(); ++i) {
        if (weights[i] <= 1e-12) continue;
        EvidenceAssignment hyp = state.local_evidence;
        hyp.local.emplace(id,
                          Bba::categorical(frame, static_cast<Subset>(1u << i)));
        const EntropyReport then =
            deng_entropy(propagate(net, hyp).at(net.root()));
        delta += weights[i] * (now.discord - then.discord);
      }
      if (delta > best_primary + 1e-9) {
        best_primary = delta;
        best = id;
      }
    }
    REQUIRE(best == chosen);
  }
}

TEST_CASE("init_state") {
  const EvidentialNetwork net = two_observable_net();
  const Engine engine(net, EngineConfig{});
  SECTION("empty evidence leaves the prior to the conditionals") {
    const BeliefState state = engine.init_state();
    REQUIRE(state.turn == 0);
    REQUIRE(state.trace.size() == 1);
    REQUIRE(state.marginals.at("H").is_vacuous());
  }
  SECTION("pinned observable equals asking that question first") {
    EvidenceAssignment initial = uniform_prior(net);
    const FramePtr fa = net.variable("a_discriminating").frame;
    initial.local.emplace("a_discriminating", Bba::categorical(fa, 1u));
    const BeliefState pinned = engine.init_state(initial);

    BeliefState asked = engine.init_state(uniform_prior(net));
    asked = engine.ingest_answer(std::move(asked), "a_discriminating",
                                 Bba::categorical(fa, 1u));
    REQUIRE(evitest::max_deviation(pinned.marginals.at("H"),
                                   asked.marginals.at("H")) <= 1e-12);
  }
  SECTION("unknown variable rejected") {
    EvidenceAssignment initial;
    initial.local.emplace("ghost", Bba::vacuous(kBin));
    REQUIRE_THROWS_MATCHES(engine.init_state(initial), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::UnknownVariable;
                           }));
  }
}

TEST_CASE("ingest_answer") {
  const EvidentialNetwork net = two_observable_net();
  const Engine engine(net, EngineConfig{});
  const FramePtr fa = net.variable("a_discriminating").frame;

  SECTION("contradiction becomes ignorance, never an error") {
    BeliefState state = engine.init_state(uniform_prior(net));
    state = engine.ingest_answer(std::move(state), "a_discriminating",
                                 Bba::categorical(fa, 1u));
    state = engine.ingest_answer(std::move(state), "a_discriminating",
                                 Bba::categorical(fa, 2u));
    const Bba& local = *state.local_evidence.find("a_discriminating");
    REQUIRE(local.theta_mass() == Approx(1.0));
  }
  SECTION("vacuous answers move nothing") {
    BeliefState state = engine.init_state(uniform_prior(net));
    const std::string before =
        marginals_to_json(state.marginals).dump();
    state = engine.ingest_answer(std::move(state), "b_uninformative",
                                 Bba::vacuous(net.variable("b_uninformative").frame));
    REQUIRE(marginals_to_json(state.marginals).dump() == before);
    REQUIRE(state.turn == 1);
    REQUIRE(state.asked.count("b_uninformative") == 1);
  }
  SECTION("two sequential singleton answers equal one K-way fusion") {
    evitest::Rng rng(83);
    for (int trial = 0; trial < 20; ++trial) {
      const Subset first = rng.chance(0.5) ? 1u : 2u;
      const Subset second = rng.chance(0.5) ? 1u : 2u;
      BeliefState seq = engine.init_state(uniform_prior(net));
      seq = engine.ingest_answer(std::move(seq), "b_uninformative",
                                 Bba::categorical(net.variable("b_uninformative").frame, first));
      seq = engine.ingest_answer(std::move(seq), "b_uninformative",
                                 Bba::categorical(net.variable("b_uninformative").frame, second));

      EvidenceAssignment direct = uniform_prior(net);
      direct.local.emplace(
          "b_uninformative",
          yager_combine_k(
              {Bba::categorical(net.variable("b_uninformative").frame, first),
               Bba::categorical(net.variable("b_uninformative").frame, second)}));
      const Marginals expected = propagate(net, direct);
      REQUIRE(evitest::max_deviation(seq.marginals.at("H"),
                                     expected.at("H")) <= 1e-9);
    }
  }
  SECTION("frame mismatch rejected") {
    BeliefState state = engine.init_state(uniform_prior(net));
    REQUIRE_THROWS_AS(engine.ingest_answer(std::move(state), "a_discriminating",
                                           Bba::vacuous(kBin)),
                      Error);
  }
}

TEST_CASE("stopping rule") {
  const EvidentialNetwork net = two_observable_net();
  const FramePtr fa = net.variable("a_discriminating").frame;

  SECTION("decides once the threshold is met") {
    const Engine engine(net, EngineConfig{});
    BeliefState state = engine.init_state(uniform_prior(net));
    REQUIRE(engine.should_stop(state).kind == StopKind::ask);
    state = engine.ingest_answer(std::move(state), "a_discriminating",
                                 Bba::categorical(fa, 1u));
    const StopResult stop = engine.should_stop(state);
    REQUIRE(stop.kind == StopKind::decide);
    REQUIRE(stop.hypothesis == "h1");
    REQUIRE_FALSE(stop.tie);
  }
  SECTION("abstains at the turn budget") {
    EngineConfig config;
    config.t_max = 2;
    const Engine engine(net, config);
    BeliefState state = engine.init_state(uniform_prior(net));
    const FramePtr fb = net.variable("b_uninformative").frame;
    state = engine.ingest_answer(std::move(state), "b_uninformative",
                                 Bba::vacuous(fb));
    REQUIRE(engine.should_stop(state).kind == StopKind::ask);
    state = engine.ingest_answer(std::move(state), "a_discriminating",
                                 Bba::vacuous(fa));
    REQUIRE(engine.should_stop(state).kind == StopKind::abstain);
  }
  SECTION("abstains when no candidates remain below threshold") {
    const Engine engine(net, EngineConfig{});
    BeliefState state = engine.init_state(uniform_prior(net));
    state = engine.ingest_answer(std::move(state), "a_discriminating",
                                 Bba::vacuous(fa));
    state = engine.ingest_answer(std::move(state), "b_uninformative",
                                 Bba::vacuous(net.variable("b_uninformative").frame));
    REQUIRE(engine.should_stop(state).kind == StopKind::abstain);
    REQUIRE_FALSE(engine.select_question(state).has_value());
  }
  SECTION("monotone in tau") {
    const Engine engine(net, EngineConfig{});
    BeliefState state = engine.init_state(uniform_prior(net));
    state = engine.ingest_answer(std::move(state), "a_discriminating",
                                 Bba::categorical(fa, 1u));
    for (double tau : {0.85, 0.6, 0.3, 0.05}) {
      EngineConfig config;
      config.tau_conf = tau;
      const Engine lenient(net, config);
      REQUIRE(lenient.should_stop(state).kind == StopKind::decide);
    }
  }
  SECTION("ties are flagged and break to the lower index") {
    EngineConfig config;
    config.tau_conf = 0.4;
    const Engine engine(net, config);
    const BeliefState state = engine.init_state(uniform_prior(net));
    const StopResult stop = engine.should_stop(state);
    REQUIRE(stop.kind == StopKind::decide);
    REQUIRE(stop.hypothesis == "h1");
    REQUIRE(stop.tie);
  }
}

TEST_CASE("run_dialogue") {
  const EvidentialNetwork net = two_observable_net();
  LabelEncoder encoder;
  TemplatePhrasing phrasing;

  SECTION("one decisive answer ends the dialogue") {
    const Engine engine(net, EngineConfig{});
    FixedAnswerClient client(std::map<std::string, std::string>{{"a_discriminating", "a1"}});
    const Outcome outcome =
        engine.run_dialogue(client, encoder, phrasing, uniform_prior(net));
    REQUIRE(outcome.decided);
    REQUIRE(outcome.hypothesis == "h1");
    REQUIRE(outcome.turns_used == 1);
    REQUIRE(outcome.transcript.size() == 1);
    REQUIRE(outcome.trace.size() == 2);
  }
  SECTION("a silent client forces abstention with full transcript") {
    const Engine engine(net, EngineConfig{});
    FixedAnswerClient client(std::map<std::string, std::string>{});
    const Outcome outcome =
        engine.run_dialogue(client, encoder, phrasing, uniform_prior(net));
    REQUIRE_FALSE(outcome.decided);
    REQUIRE(outcome.turns_used == 2);  // both observables asked, then nothing
    REQUIRE(static_cast<int>(outcome.transcript.size()) == outcome.turns_used);
  }
  SECTION("outcomes serialize identically across runs") {
    const Engine engine(net, EngineConfig{});
    FixedAnswerClient client(std::map<std::string, std::string>{{"a_discriminating", "a1"}});
    const std::string a =
        outcome_to_json(
            engine.run_dialogue(client, encoder, phrasing, uniform_prior(net)),
            engine.hypotheses())
            .dump();
    const std::string b =
        outcome_to_json(
            engine.run_dialogue(client, encoder, phrasing, uniform_prior(net)),
            engine.hypotheses())
            .dump();
    REQUIRE(a == b);
  }
  SECTION("provider failure carries the partial transcript") {
    struct ExplodingEncoder : AnswerEncoder {
      Bba encode(const std::string&, const FramePtr&) override {
        fail(Errc::ProviderFailure, "boom");
      }
    };
    const Engine engine(net, EngineConfig{});
    FixedAnswerClient client(std::map<std::string, std::string>{{"a_discriminating", "a1"}});
    ExplodingEncoder bad;
    try {
      engine.run_dialogue(client, bad, phrasing, uniform_prior(net));
      FAIL("expected DialogueAborted");
    } catch (const Engine::DialogueAborted& e) {
      REQUIRE(e.code() == Errc::ProviderFailure);
      REQUIRE(e.partial.turns_used == 0);
      REQUIRE(e.partial.trace.size() == 1);
    }
  }
}

TEST_CASE("trace rows are consistent") {
  const EvidentialNetwork net = two_observable_net();
  const Engine engine(net, EngineConfig{});
  BeliefState state = engine.init_state(uniform_prior(net));
  const FramePtr fb = net.variable("b_uninformative").frame;
  state = engine.ingest_answer(std::move(state), "b_uninformative",
                               Bba::categorical(fb, 1u));
  REQUIRE(state.trace.size() == static_cast<std::size_t>(state.turn) + 1);
  for (const auto& row : state.trace) {
    double total = 0.0;
    for (double v : row.betp) total += v;
    REQUIRE(total == Approx(1.0).margin(1e-9));
    REQUIRE(row.e_d == Approx(row.nonspecificity + row.discord));
  }
}

TEST_CASE("ig_bayesian mode") {
  SECTION("pignistic collapse of a set-valued row") {
    const FramePtr abc = make_frame("abc", {"a", "b", "c"});
    const Bba row = Bba::from_masses(
        abc, {{abc->subset_of({"a", "b"}), 0.7}, {abc->full_mask(), 0.3}});
    const Bba collapsed = row.to_bayesian();
    REQUIRE(collapsed.mass(0b001u) == Approx(0.45).margin(1e-12));
    REQUIRE(collapsed.mass(0b010u) == Approx(0.45).margin(1e-12));
    REQUIRE(collapsed.mass(0b100u) == Approx(0.10).margin(1e-12));
  }
  SECTION("rows without singleton support become uniform") {
    const FramePtr abc = make_frame("abc", {"a", "b", "c"});
    EvidentialNetwork net(
        Variable{"H", kHyp, VariableKind::hypothesis, "hypothesis"});
    net = add_variable(
        net, Variable{"o", abc, VariableKind::observable, "sign"});
    ConditionalBba edge;
    edge.parent = "H";
    edge.child = "o";
    edge.table = {
        {"h1", Bba::from_masses(abc, {{abc->subset_of({"a", "b"}), 0.9},
                                      {abc->full_mask(), 0.1}})},
        {"h2", Bba::vacuous(abc)}};
    net = add_edge(net, edge);
    const EvidentialNetwork collapsed = collapse_to_bayesian(net);
    for (const auto& [state, row] : collapsed.edges()[0].table) {
      (void)state;
      for (const auto& [subset, mass] : row.masses()) {
        REQUIRE(subset_size(subset) == 1);
        REQUIRE(mass == Approx(1.0 / 3.0).margin(1e-12));
      }
    }
  }
  SECTION("identical outcomes on fully Bayesian networks") {
    evitest::Rng rng(89);
    const EvidentialNetwork net = evitest::random_bayesian_polytree(rng, 4);
    if (!net.observable_ids().empty()) {
      LabelEncoder encoder;
      TemplatePhrasing phrasing;
      std::map<std::string, std::string> answers;
      for (const auto& id : net.observable_ids()) {
        answers[id] = rng.chance(0.5) ? "t" : "f";
      }
      EvidenceAssignment prior;
      prior.local.emplace(net.root(),
                          evitest::random_bayesian_bba(rng, net.hypothesis().frame));
      EngineConfig ev_config;
      EngineConfig ig_config;
      ig_config.mode = EngineMode::ig_bayesian;
      FixedAnswerClient c1(answers);
      FixedAnswerClient c2(answers);
      const Outcome ev =
          Engine(net, ev_config).run_dialogue(c1, encoder, phrasing, prior);
      const Outcome ig =
          Engine(net, ig_config).run_dialogue(c2, encoder, phrasing, prior);
      REQUIRE(ev.decided == ig.decided);
      REQUIRE(ev.hypothesis == ig.hypothesis);
      REQUIRE(ev.turns_used == ig.turns_used);
    }
  }
}

TEST_CASE("grammar encoder for interactive answers") {
  GrammarEncoder encoder(0.7);
  REQUIRE(encoder.encode("o1", kBin).mass(1u) == Approx(1.0));
  const Bba hedged = encoder.encode("probably o2", kBin);
  REQUIRE(hedged.mass(2u) == Approx(0.7));
  REQUIRE(hedged.theta_mass() == Approx(0.3));
  REQUIRE(encoder.encode("unknown", kBin).is_vacuous());
  REQUIRE(encoder.encode("   ", kBin).is_vacuous());
  REQUIRE_THROWS_MATCHES(encoder.encode("garble", kBin), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::UnrecognizedAnswer;
                         }));
}

TEST_CASE("config validation") {
  EngineConfig config;
  config.tau_conf = 1.5;
  REQUIRE_THROWS_AS(config.validate(), Error);
  config = EngineConfig{};
  config.t_max = 0;
  REQUIRE_THROWS_AS(config.validate(), Error);
  config = EngineConfig{};
  config.hedge_mass = 1.0;
  REQUIRE_THROWS_AS(config.validate(), Error);
  config = EngineConfig{};
  config.epsilon_nonsp = -0.1;
  REQUIRE_THROWS_AS(config.validate(), Error);
}
