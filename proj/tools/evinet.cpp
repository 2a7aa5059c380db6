#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evinet/asia.hpp"
#include "evinet/construct.hpp"
#include "evinet/engine.hpp"
#include "evinet/harness.hpp"
#include "evinet/providers.hpp"
#include "evinet/serialize.hpp"

#ifdef EVINET_WITH_HTTP
#include "evinet/http_provider.hpp"
#endif

namespace {

using namespace evinet;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::InvalidConfig:
    case Errc::ParseError:
    case Errc::InvalidFrame:
      return 2;
    default:
      return 3;
  }
}

std::vector<Document> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open corpus '" + path + "'");
  std::vector<Document> corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      corpus.push_back(
          Document{require_field(j, "id", "document").get<std::string>(),
                   j.value("text", std::string{})});
    } catch (const Json::exception& e) {
      fail(Errc::ParseError, "corpus '" + path + "' line " +
                                 std::to_string(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

void save_corpus(const std::string& path, const std::vector<Document>& corpus) {
  std::string body;
  for (const auto& doc : corpus) {
    body += OrderedJson{{"id", doc.id}, {"text", doc.text}}.dump();
    body += '\n';
  }
  write_text_file(path, body);
}

struct EngineOpts {
  double tau_conf = 0.85;
  int t_max = 15;
  double epsilon_nonsp = 0.1;
  double hedge_mass = 0.7;
  std::string mode = "evidential";

  EngineConfig to_config() const {
    EngineConfig config;
    config.tau_conf = tau_conf;
    config.t_max = t_max;
    config.epsilon_nonsp = epsilon_nonsp;
    config.hedge_mass = hedge_mass;
    config.mode = mode_from_name(mode);
    config.validate();
    return config;
  }
};

void add_engine_options(CLI::App* cmd, EngineOpts& opts) {
  cmd->add_option("--tau-conf", opts.tau_conf,
                  "confidence threshold for deciding");
  cmd->add_option("--t-max", opts.t_max, "turn budget before abstaining");
  cmd->add_option("--epsilon-nonsp", opts.epsilon_nonsp,
                  "nonspecificity level that switches the question objective");
  cmd->add_option("--hedge-mass", opts.hedge_mass,
                  "mass placed on hedged interactive answers");
  cmd->add_option("--mode", opts.mode, "engine mode")
      ->check(CLI::IsMember({"evidential", "ig_bayesian"}));
}

// Provider selection shared by the subcommands: a scripted fixture, or the
// HTTP provider configured from the environment.
struct ProviderBundle {
  std::unique_ptr<ScriptedProvider> scripted;
#ifdef EVINET_WITH_HTTP
  std::unique_ptr<HttpProvider> http;
#endif

  ChildProposer* proposer = nullptr;
  BbaElicitor* elicitor = nullptr;
  AnswerEncoder* encoder = nullptr;
  QuestionPhrasing* phrasing = nullptr;
};

ProviderBundle make_providers(const std::string& fixture_path, bool use_http) {
  ProviderBundle bundle;
  if (use_http) {
#ifdef EVINET_WITH_HTTP
    bundle.http = std::make_unique<HttpProvider>(HttpProviderConfig::from_env());
    bundle.proposer = bundle.http.get();
    bundle.elicitor = bundle.http.get();
    bundle.encoder = bundle.http.get();
    bundle.phrasing = bundle.http.get();
    return bundle;
#else
    fail(Errc::InvalidConfig, "this build has no HTTP provider");
#endif
  }
  if (fixture_path.empty()) {
    fail(Errc::InvalidConfig, "a --fixture file (or --http) is required");
  }
  bundle.scripted =
      std::make_unique<ScriptedProvider>(ScriptedProvider::load(fixture_path));
  bundle.proposer = bundle.scripted.get();
  bundle.elicitor = bundle.scripted.get();
  bundle.encoder = bundle.scripted.get();
  bundle.phrasing = bundle.scripted.get();
  return bundle;
}

std::string timestamp_text() {
  const std::time_t now = std::time(nullptr);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y%m%d-%H%M%S", std::localtime(&now));
  return buffer;
}

void print_betp(const EvidentialNetwork& net, const std::vector<double>& betp) {
  const auto& states = net.hypothesis().frame->states();
  std::cout << "BetP:";
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::cout << " " << states[i] << "=" << number_text(betp[i]);
  }
  std::cout << "\n";
}

int cmd_build(const std::string& corpus_path, const std::string& fixture_path,
              bool use_http, const std::string& root_path,
              const std::string& out_path, const ConstructionLimits& limits) {
  const std::vector<Document> corpus = load_corpus(corpus_path);
  Variable root = variable_from_json(read_json_file(root_path));
  if (root.kind != VariableKind::hypothesis) {
    fail(Errc::InvalidConfig, "--root variable must have kind \"hypothesis\"");
  }
  ProviderBundle providers = make_providers(fixture_path, use_http);
  const EvidentialNetwork net = construct_network(
      corpus, root, *providers.proposer, *providers.elicitor, limits);
  write_json_file(out_path, network_to_json(net));
  std::cout << "network: " << net.variables().size() << " variables, "
            << net.edges().size() << " edges, root " << net.root() << "\n";
  std::cout << "truncated: " << (net.meta().truncated ? "yes" : "no") << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

CaseInstance load_single_case(const std::string& case_path,
                              const std::string& dataset_path,
                              const std::string& case_id) {
  if (!case_path.empty()) return case_from_json(read_json_file(case_path));
  const std::vector<CaseInstance> dataset = load_dataset(dataset_path);
  if (dataset.empty()) fail(Errc::EmptyDataset, "dataset is empty");
  if (case_id.empty()) return dataset.front();
  for (const auto& instance : dataset) {
    if (instance.id == case_id) return instance;
  }
  fail(Errc::InvalidConfig, "no case '" + case_id + "' in dataset");
}

int cmd_run_batch(const EvidentialNetwork& net, const EngineConfig& config,
                  const CaseInstance& instance,
                  const std::string& fixture_path,
                  const std::string& out_path, const std::string& trace_path) {
  validate_case(instance, net);
  const Engine engine(net, config);
  OracleClient client(instance);
  CaseFactEncoder fact_encoder(instance);
  TemplatePhrasing template_phrasing;
  std::unique_ptr<ScriptedProvider> scripted;
  AnswerEncoder* encoder = &fact_encoder;
  QuestionPhrasing* phrasing = &template_phrasing;
  if (!fixture_path.empty()) {
    scripted =
        std::make_unique<ScriptedProvider>(ScriptedProvider::load(fixture_path));
    encoder = scripted.get();
    phrasing = scripted.get();
  }
  const Outcome outcome = engine.run_dialogue(
      client, *encoder, *phrasing, initial_evidence_for(instance, net));
  const OrderedJson j = outcome_to_json(outcome, instance.hypotheses);
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(out_path, j);
    std::cout << "decision: "
              << (outcome.decided ? outcome.hypothesis : "abstain")
              << " after " << outcome.turns_used << " turn(s)\n";
    std::cout << "wrote " << out_path << "\n";
  }
  if (!trace_path.empty()) {
    write_text_file(trace_path,
                    trace_to_csv(outcome.trace, instance.hypotheses,
                                 instance.true_hypothesis));
  }
  return 0;
}

int cmd_run_interactive(const EvidentialNetwork& net,
                        const EngineConfig& config,
                        const std::string& fixture_path,
                        const std::string& out_path,
                        const std::string& trace_path) {
  const Engine engine(net, config);
  GrammarEncoder encoder(config.hedge_mass);
  TemplatePhrasing template_phrasing;
  std::unique_ptr<ScriptedProvider> scripted;
  QuestionPhrasing* phrasing = &template_phrasing;
  if (!fixture_path.empty()) {
    scripted =
        std::make_unique<ScriptedProvider>(ScriptedProvider::load(fixture_path));
    phrasing = scripted.get();
  }

  BeliefState state = engine.init_state();
  StopResult stop;
  print_betp(net, state.marginals.at(net.root()).pignistic());
  while (true) {
    stop = engine.should_stop(state);
    if (stop.kind != StopKind::ask) break;
    const std::optional<std::string> target = engine.select_question(state);
    if (!target) {
      stop = StopResult{StopKind::abstain, {}, false};
      break;
    }
    const Variable& var = net.variable(*target);
    const std::string question = phrasing->phrase(var);
    std::cout << "\n[turn " << state.turn + 1 << "] " << question << "\n";
    std::cout << "(states:";
    for (const auto& s : var.frame->states()) std::cout << " " << s;
    std::cout << "; also 'probably <state>' or 'unknown')\n> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) {
      std::cout << "\n(end of input)\n";
      stop = StopResult{StopKind::abstain, {}, false};
      break;
    }
    Bba answer = Bba::vacuous(var.frame);
    try {
      answer = encoder.encode(line, var.frame);
    } catch (const Error& e) {
      if (e.code() == Errc::UnrecognizedAnswer) {
        std::cout << e.what() << "\n";
        continue;  // same question again; no turn consumed
      }
      throw;
    }
    state = engine.ingest_answer(std::move(state), *target, answer, question,
                                 line);
    print_betp(net, state.marginals.at(net.root()).pignistic());
  }

  if (stop.kind == StopKind::decide) {
    std::cout << "\ndecision: " << stop.hypothesis << " after " << state.turn
              << " turn(s)\n";
  } else {
    std::cout << "\nabstained after " << state.turn << " turn(s)\n";
  }
  const Outcome outcome = engine.snapshot_outcome(state, stop);
  if (!out_path.empty()) {
    write_json_file(out_path,
                    outcome_to_json(outcome, engine.hypotheses()));
  }
  if (!trace_path.empty()) {
    write_text_file(trace_path, trace_to_csv(outcome.trace, engine.hypotheses()));
  }
  return 0;
}

int cmd_bench(const EvidentialNetwork& net, const EngineConfig& config,
              const std::string& dataset_path, std::string out_dir,
              bool full_disclosure, const std::string& fixture_path,
              std::uint64_t seed) {
  const std::vector<CaseInstance> dataset = load_dataset(dataset_path);
  if (out_dir.empty()) {
    out_dir = "bench_" + timestamp_text() + "_" + std::to_string(seed);
  }
  std::filesystem::create_directories(out_dir);
  std::unique_ptr<ScriptedProvider> scripted;
  BenchmarkOptions options;
  options.full_disclosure = full_disclosure;
  options.trace_dir = out_dir;
  if (!fixture_path.empty()) {
    scripted =
        std::make_unique<ScriptedProvider>(ScriptedProvider::load(fixture_path));
    options.phrasing = scripted.get();
  }
  const BenchmarkReport report = run_benchmark(dataset, net, config, options);
  write_json_file(out_dir + "/report.json", report_to_json(report, config));
  std::cout << report_to_table(report);
  std::cout << "wrote " << out_dir << "/report.json\n";
  return 0;
}

std::string dot_text(const EvidentialNetwork& net) {
  std::string dot = "digraph evinet {\n";
  for (const auto& [id, v] : net.variables()) {
    std::string shape = "ellipse";
    if (v.kind == VariableKind::hypothesis) shape = "box";
    if (v.kind == VariableKind::intermediate) shape = "diamond";
    dot += "  \"" + id + "\" [shape=" + shape + "];\n";
  }
  for (const auto& e : net.edges()) {
    dot += "  \"" + e.parent + "\" -> \"" + e.child + "\";\n";
  }
  dot += "}\n";
  return dot;
}

int cmd_inspect(const EvidentialNetwork& net, const std::string& evidence_path,
                bool marginals, const std::string& dot_path) {
  std::cout << "root: " << net.root() << "\n";
  std::cout << "variables: " << net.variables().size()
            << ", edges: " << net.edges().size() << "\n";
  for (const auto& [id, v] : net.variables()) {
    std::cout << id << " [" << kind_name(v.kind) << "]";
    if (!v.description.empty()) std::cout << " " << v.description;
    std::cout << "\n  states:";
    for (const auto& s : v.frame->states()) std::cout << " " << s;
    std::cout << "\n";
    for (const auto* e : net.edges_from(id)) {
      std::cout << "  -> " << e->child << "\n";
    }
  }
  if (marginals) {
    EvidenceAssignment evidence;
    if (!evidence_path.empty()) {
      evidence = evidence_from_json(read_json_file(evidence_path), net);
    }
    const Marginals result = propagate(net, evidence);
    std::cout << "\nmarginals:\n";
    for (const auto& [id, bba] : result.by_node) {
      std::cout << id << "\n";
      const std::vector<double> betp = bba.pignistic();
      const Frame& frame = *bba.frame();
      for (std::size_t i = 0; i < frame.size(); ++i) {
        const Subset s = static_cast<Subset>(1u << i);
        std::cout << "  " << frame.states()[i]
                  << "  bel=" << number_text(bba.belief(s))
                  << "  pl=" << number_text(bba.plausibility(s))
                  << "  betp=" << number_text(betp[i]) << "\n";
      }
      std::cout << "  ignorance=" << number_text(bba.theta_mass()) << "\n";
    }
    double total_conflict = result.total_conflict();
    std::cout << "conflict consumed: " << number_text(total_conflict) << "\n";
  }
  if (!dot_path.empty()) {
    write_text_file(dot_path, dot_text(net));
    std::cout << "wrote " << dot_path << "\n";
  } else if (!marginals) {
    std::cout << "\n" << dot_text(net);
  }
  return 0;
}

int cmd_generate_asia(std::uint64_t seed, int n_cases, int distractors,
                      const std::string& out_dir) {
  AsiaOptions options;
  options.n_cases = n_cases;
  options.distractors = distractors;
  const AsiaBenchmark bench = generate_asia_benchmark(seed, options);
  std::filesystem::create_directories(out_dir);
  write_json_file(out_dir + "/root.json", variable_to_json(bench.root));
  write_json_file(out_dir + "/ground_truth.json",
                  network_to_json(bench.ground_truth));
  write_json_file(out_dir + "/dialogue_net.json",
                  network_to_json(bench.dialogue_net));
  write_json_file(out_dir + "/ambiguous_net.json",
                  network_to_json(bench.ambiguous_net));
  write_json_file(out_dir + "/fixture.json", bench.fixture_json);
  save_corpus(out_dir + "/corpus.jsonl", bench.corpus);
  save_dataset(out_dir + "/cases.jsonl", bench.cases);
  save_dataset(out_dir + "/ambiguous_cases.jsonl", bench.ambiguous_cases);
  std::cout << "seed " << seed << ": " << bench.cases.size() << " cases, "
            << bench.ambiguous_cases.size() << " ambiguous cases\n";
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evidential-network construction, dialogue, and benchmarking"};
  app.set_config("--config", "", "key=value config file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for generated fixtures")
      ->capture_default_str();

  // build
  auto* build = app.add_subcommand("build", "construct a network from a corpus");
  std::string build_corpus, build_fixture, build_root, build_out = "network.json";
  bool build_http = false;
  ConstructionLimits limits;
  build->add_option("--corpus", build_corpus, "corpus JSONL")->required();
  build->add_option("--fixture", build_fixture, "scripted provider fixture");
  build->add_flag("--http", build_http, "use the HTTP provider");
  build->add_option("--root", build_root, "hypothesis variable JSON")->required();
  build->add_option("--out", build_out, "output network JSON");
  build->add_option("--max-depth", limits.max_depth);
  build->add_option("--max-nodes", limits.max_nodes);
  build->add_option("--max-in-degree", limits.max_in_degree);
  build->add_option("--max-out-degree", limits.max_out_degree);
  build->add_option("--top-k", limits.retrieval_top_k);

  // run
  auto* run = app.add_subcommand("run", "run a single dialogue");
  std::string run_net, run_case, run_dataset, run_case_id, run_fixture;
  std::string run_out, run_trace;
  bool run_interactive = false;
  EngineOpts run_opts;
  run->add_option("--net", run_net, "network JSON")->required();
  run->add_option("--case", run_case, "single case JSON");
  run->add_option("--dataset", run_dataset, "case dataset JSONL");
  run->add_option("--case-id", run_case_id, "case id within --dataset");
  run->add_flag("--interactive", run_interactive, "answer questions yourself");
  run->add_option("--fixture", run_fixture,
                  "scripted provider fixture for encoding/phrasing");
  run->add_option("--out", run_out, "outcome JSON path (default: stdout)");
  run->add_option("--trace", run_trace, "per-turn trace CSV path");
  add_engine_options(run, run_opts);

  // bench
  auto* bench = app.add_subcommand("bench", "run the benchmark over a dataset");
  std::string bench_net, bench_dataset, bench_out_dir, bench_fixture;
  bool bench_full = false;
  EngineOpts bench_opts;
  bench->add_option("--net", bench_net, "network JSON")->required();
  bench->add_option("--dataset", bench_dataset, "case dataset JSONL")->required();
  bench->add_option("--out-dir", bench_out_dir,
                    "output directory (default: bench_<timestamp>_<seed>)");
  bench->add_flag("--full-disclosure", bench_full,
                  "answer every question before deciding");
  bench->add_option("--fixture", bench_fixture, "fixture for question phrasing");
  add_engine_options(bench, bench_opts);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "print a network and its beliefs");
  std::string inspect_net, inspect_evidence, inspect_dot;
  bool inspect_marginals = false;
  inspect->add_option("--net", inspect_net, "network JSON")->required();
  inspect->add_option("--evidence", inspect_evidence, "evidence JSON");
  inspect->add_flag("--marginals", inspect_marginals,
                    "print per-node Bel/Pl/BetP tables");
  inspect->add_option("--dot", inspect_dot, "write a DOT graph here");

  // generate-asia
  auto* gen = app.add_subcommand("generate-asia",
                                 "generate the synthetic diagnostic benchmark");
  std::string gen_out_dir = "asia_out";
  int gen_cases = 60;
  int gen_distractors = 3;
  gen->add_option("--out-dir", gen_out_dir, "output directory");
  gen->add_option("--cases", gen_cases, "dialogue cases per variant");
  gen->add_option("--distractors", gen_distractors,
                  "distractor proposals in the fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) {
      return cmd_build(build_corpus, build_fixture, build_http, build_root,
                       build_out, limits);
    }
    if (run->parsed()) {
      const EvidentialNetwork net = network_from_json(read_json_file(run_net));
      const EngineConfig config = run_opts.to_config();
      if (run_interactive) {
        return cmd_run_interactive(net, config, run_fixture, run_out, run_trace);
      }
      if (run_case.empty() && run_dataset.empty()) {
        fail(Errc::InvalidConfig, "run needs --case, --dataset, or --interactive");
      }
      const CaseInstance instance =
          load_single_case(run_case, run_dataset, run_case_id);
      return cmd_run_batch(net, config, instance, run_fixture, run_out,
                           run_trace);
    }
    if (bench->parsed()) {
      const EvidentialNetwork net =
          network_from_json(read_json_file(bench_net));
      return cmd_bench(net, bench_opts.to_config(), bench_dataset,
                       bench_out_dir, bench_full, bench_fixture, seed);
    }
    if (inspect->parsed()) {
      const EvidentialNetwork net =
          network_from_json(read_json_file(inspect_net));
      return cmd_inspect(net, inspect_evidence, inspect_marginals, inspect_dot);
    }
    if (gen->parsed()) {
      return cmd_generate_asia(seed, gen_cases, gen_distractors, gen_out_dir);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
