// End-to-end checks of the command-line tool against the bundled demo data:
// happy paths, the interactive loop fed from a pipe, and the exit-code
// contract (0 ok, 2 usage/config, 3 runtime/provider).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

int g_failures = 0;
std::string g_cli;
fs::path g_demo;
fs::path g_work;

void expect(bool condition, const std::string& label) {
  std::cout << (condition ? "[ok] " : "[FAIL] ") << label << std::endl;
  if (!condition) ++g_failures;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& stdin_text = {}) {
  const fs::path out_file = g_work / "stdout.txt";
  std::string command = g_cli + " " + args;
  if (!stdin_text.empty()) {
    const fs::path in_file = g_work / "stdin.txt";
    std::ofstream(in_file) << stdin_text;
    command += " < " + in_file.string();
  }
  command += " > " + out_file.string() + " 2> " + (g_work / "stderr.txt").string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.out = buffer.str();
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--cli") g_cli = fs::absolute(argv[i + 1]).string();
    if (std::string(argv[i]) == "--data") g_demo = fs::absolute(argv[i + 1]);
  }
  if (g_cli.empty() || g_demo.empty()) {
    std::cerr << "usage: cli_smoke --cli <evinet> --data <demo dir>\n";
    return 1;
  }
  g_work = fs::temp_directory_path() / "evinet_cli_smoke";
  fs::remove_all(g_work);
  fs::create_directories(g_work);

  const std::string net = (g_demo / "net.json").string();
  const std::string demo_case = (g_demo / "case.json").string();

  {
    const fs::path outcome = g_work / "outcome.json";
    const RunResult r = run("run --net " + net + " --case " + demo_case +
                            " --out " + outcome.string() + " --trace " +
                            (g_work / "trace.csv").string());
    expect(r.exit_code == 0, "demo case exits 0");
    std::ifstream in(outcome);
    nlohmann::json j;
    in >> j;
    expect(j["decision"]["kind"] == "decide" &&
               j["decision"]["hypothesis"] == "flu" && j["turns_used"] == 1,
           "demo case decides flu in one turn");
    std::ifstream trace(g_work / "trace.csv");
    std::string header;
    std::getline(trace, header);
    expect(header ==
               "turn,betp_true,betp_max,e_d,nonspecificity,discord,conflict",
           "trace header matches the contract");
  }

  {
    const RunResult r = run("run --net " + net + " --case " + demo_case +
                            " --fixture " + (g_demo / "fixture.json").string());
    expect(r.exit_code == 0 && contains(r.out, "\"decide\""),
           "scripted fixture encoding path works");
    expect(contains(r.out, "Do you have a fever?"),
           "fixture phrasing appears in the transcript");
  }

  {
    const RunResult r = run("run --net " + net + " --case " + demo_case +
                            " --mode ig_bayesian");
    expect(r.exit_code == 0 && contains(r.out, "\"mode\": \"ig_bayesian\""),
           "outcome records the engine mode");
  }

  {
    const RunResult r =
        run("build --corpus " + (g_demo / "corpus.jsonl").string() +
            " --fixture " + (g_demo / "fixture.json").string() + " --root " +
            (g_demo / "root.json").string() + " --out " +
            (g_work / "built_net.json").string());
    expect(r.exit_code == 0 && contains(r.out, "3 variables, 2 edges"),
           "build reconstructs the demo network");
  }

  {
    const RunResult r = run("inspect --net " + net + " --marginals");
    expect(r.exit_code == 0 && contains(r.out, "ignorance=") &&
               contains(r.out, "betp="),
           "inspect prints Bel/Pl/BetP tables");
  }

  {
    const RunResult r = run("run --net " + net + " --interactive", "present\n");
    expect(r.exit_code == 0 && contains(r.out, "decision: flu"),
           "interactive session decides from one answer");
  }

  {
    const RunResult r = run("run --net " + net + " --interactive",
                            "unknown\nunknown\n");
    expect(r.exit_code == 0 && contains(r.out, "abstained after 2 turn(s)"),
           "interactive session abstains when nothing is learned");
  }

  {
    const RunResult r = run("run --net " + net + " --interactive",
                            "gibberish\npresent\n");
    expect(r.exit_code == 0 && contains(r.out, "decision: flu"),
           "unrecognized interactive answers re-ask the question");
  }

  {
    const fs::path config = g_work / "strict.ini";
    std::ofstream(config) << "[run]\ntau-conf=0.99\n";
    const RunResult r = run("--config " + config.string() + " run --net " +
                            net + " --case " + demo_case);
    expect(r.exit_code == 0 && contains(r.out, "\"abstain\""),
           "config file raises the threshold; flags still parse");
  }

  // exit-code contract
  {
    const RunResult r = run("build --corpus " + (g_demo / "corpus.jsonl").string() +
                            " --fixture " + (g_work / "missing.json").string() +
                            " --root " + (g_demo / "root.json").string() +
                            " --out " + (g_work / "x.json").string());
    expect(r.exit_code == 2, "missing fixture path exits 2");
  }
  {
    const RunResult r =
        run("run --net " + net + " --case " + demo_case + " --mode bogus");
    expect(r.exit_code == 2, "unknown mode exits 2");
  }
  {
    const RunResult r = run("run --net " + net + " --case " + demo_case +
                            " --tau-conf 1.5");
    expect(r.exit_code == 2, "out-of-range tau exits 2");
  }
  {
    const fs::path empty_fixture = g_work / "empty_fixture.json";
    std::ofstream(empty_fixture) << R"({"version": 1})";
    const RunResult r = run("run --net " + net + " --case " + demo_case +
                            " --fixture " + empty_fixture.string());
    expect(r.exit_code == 3, "fixture miss during a dialogue exits 3");
  }

  fs::remove_all(g_work);
  if (g_failures > 0) {
    std::cout << g_failures << " check(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all CLI checks passed" << std::endl;
  return 0;
}
