// End-to-end tests of the tracelab binary: exit-code contract, report
// schema, byte-identical reruns, config files. The binary path comes from
// the build (TRACELAB_CLI_BIN).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(TRACELAB_CLI_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify: passing claim exits 0 and emits schema-stable JSON") {
  const auto r = run_cli("verify --claim mt1 --trials 40 --seed 7");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == "tracelab-report/1");
  CHECK(j["reports"].size() == 160);  // 4 default functions x 40 trials
  for (const auto& rep : j["reports"]) {
    CHECK(rep["claim"] == "mt1");
    CHECK(rep["verdict"] == "Pass");
    CHECK(rep["context"].contains("seed"));
  }
}

TEST_CASE("verify: unknown ids and malformed ranges exit 2") {
  CHECK(run_cli("verify --claim nosuch --trials 5").exit_code == 2);
  CHECK(run_cli("verify --claim mt1 --functions nope --trials 5").exit_code == 2);
  CHECK(run_cli("verify --claim mt1 --dims 4..2 --trials 5").exit_code == 2);
  CHECK(run_cli("verify --claim mt1 --format yaml --trials 5").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
}

TEST_CASE("verify: probe violations gate explicit runs but not --claim all") {
  const auto probe = run_cli("verify --claim tl-literal --trials 15 --seed 3");
  CHECK(probe.exit_code == 1);
  const json j = json::parse(probe.out);
  bool violation_with_context = false;
  for (const auto& rep : j["reports"]) {
    if (rep["verdict"] == "Violation" && rep["context"]["seed"].get<std::uint64_t>() != 0)
      violation_with_context = true;
  }
  CHECK(violation_with_context);

  CHECK(run_cli("verify --claim all --trials 10 --seed 3").exit_code == 0);
  CHECK(run_cli("verify --claim all --trials 10 --seed 3 --include-probes").exit_code == 1);
}

TEST_CASE("verify: byte-identical reports over reruns and thread counts") {
  const std::string out1 = "/tmp/tracelab_cli_r1.json";
  const std::string out2 = "/tmp/tracelab_cli_r2.json";
  CHECK(run_cli("verify --claim tr1 --trials 30 --seed 13 --out " + out1).exit_code == 0);
  CHECK(run_cli("verify --claim tr1 --trials 30 --seed 13 --threads 4 --out " + out2).exit_code ==
        0);
  CHECK(slurp(out1) == slurp(out2));
  // the manifest exists and echoes the config
  const json manifest = json::parse(slurp(out1 + ".manifest.json"));
  CHECK(manifest["config"]["trials"] == 30);
  CHECK(manifest["config"]["seed"] == 13);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  std::remove((out1 + ".manifest.json").c_str());
  std::remove((out2 + ".manifest.json").c_str());
}

TEST_CASE("verify: csv projection") {
  const auto r = run_cli("verify --claim clarkson-p --trials 5 --seed 2 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("claim,verdict,margin,tolerance,seed,n,function,", 0) == 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  CHECK(lines == 5 * 6 + 1);  // 6 default p values
}

TEST_CASE("config file supplies defaults, flags override") {
  const std::string cfg = "/tmp/tracelab_cli_cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"claim": "mt1", "trials": 12, "seed": 5, "functions": ["power:4"]})";
  }
  const auto r = run_cli("verify --config " + cfg);
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["reports"].size() == 12);

  const auto overridden = run_cli("verify --config " + cfg + " --trials 3");
  CHECK(json::parse(overridden.out)["reports"].size() == 3);
  std::remove(cfg.c_str());
}

TEST_CASE("counterexample: expectation contract") {
  const auto found = run_cli(
      "counterexample --claim tl-literal --functions power:2 --budget 50 --max-dim 2 --max-n 3 "
      "--seed 11");
  CHECK(found.exit_code == 0);
  const json j = json::parse(found.out);
  CHECK(j["found"].get<bool>());
  CHECK(j["dim"] == 1);
  CHECK(j["n"] == 2);
  CHECK(!j["inputs"]["xs"].empty());

  CHECK(run_cli("counterexample --claim id1 --budget 20 --max-dim 2 --max-n 3 --expect none")
            .exit_code == 0);
  CHECK(run_cli("counterexample --claim id1 --budget 20 --max-dim 2 --max-n 3 --expect found")
            .exit_code == 1);
  CHECK(run_cli("counterexample --claim id1 --budget 0").exit_code == 2);
  CHECK(run_cli("counterexample --claim id1 --budget 5 --expect maybe").exit_code == 2);
}

TEST_CASE("identity: residual gate and precondition failures") {
  CHECK(run_cli("identity --identity ibk --trials 60 --seed 5").exit_code == 0);
  CHECK(run_cli("identity --identity id1 --trials 60 --seed 5 --tuple-size 1").exit_code == 0);
  CHECK(run_cli("identity --identity mo2 --alphas 1,3 --trials 5 --tuple-size 2").exit_code == 2);
  CHECK(run_cli("identity --identity nosuch --trials 5").exit_code == 2);
}

TEST_CASE("selftest subcommand reports flip detection") {
  const auto r = run_cli("selftest --claim mt1 --claim clarkson-p --seed 3");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  for (const auto& res : j["results"]) {
    CHECK(res["applicable"].get<bool>());
    CHECK(res["violations"].get<int>() >= 1);
  }
}
