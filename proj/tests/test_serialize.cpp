#include <cstdio>
#include <fstream>

#include <doctest.h>
#include <json.hpp>

#include "test_helpers.hpp"
#include "tracelab/harness.hpp"
#include "tracelab/serialize.hpp"

using namespace tracelab;
using nlohmann::json;

TEST_CASE("hex bit patterns round-trip doubles exactly") {
  for (double v : {0.0, 1.0, -1.0, 0.1, 1e-300, 3.141592653589793, 1e308}) {
    CHECK(double_from_hex(double_to_hex(v)) == v);
  }
  CHECK(double_to_hex(1.0) == "0x3ff0000000000000");
}

TEST_CASE("campaign JSON carries the stable schema and round-trips") {
  TrialConfig config;
  config.trials = 8;
  config.master_seed = 21;
  const auto result = run_campaign(config, {"mt1", "clarkson-p"});
  const std::string body = campaign_to_json(result);

  const json j = json::parse(body);
  CHECK(j["schema"] == "tracelab-report/1");
  CHECK(j["rng_version"] == kRngVersion);
  REQUIRE(!j["reports"].empty());
  for (const auto& r : j["reports"]) {
    CHECK(r.contains("claim"));
    CHECK(r.contains("verdict"));
    CHECK(r.contains("sides"));
    CHECK(r.contains("margin"));
    CHECK(r.contains("tolerance"));
    const auto& c = r["context"];
    CHECK(c.contains("seed"));
    CHECK(c.contains("dims"));
    CHECK(c.contains("weights"));
    CHECK(c.contains("n"));
    CHECK(c.contains("alphas"));
    CHECK(c.contains("function"));
    // hex patterns replay the decimal values exactly
    for (std::size_t i = 0; i < c["weights"].size(); ++i)
      CHECK(double_from_hex(c["weights_hex"][i].get<std::string>()) ==
            c["weights"][i].get<double>());
  }
  // parse -> dump -> parse is lossless
  CHECK(json::parse(json::parse(body).dump()) == j);
}

TEST_CASE("CSV is a flat projection with one row per report") {
  TrialConfig config;
  config.trials = 5;
  config.master_seed = 9;
  const auto result = run_campaign(config, {"clarkson-p"});
  const std::string csv = campaign_to_csv(result);

  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == result.reports.size() + 1);
  CHECK(csv.rfind("claim,verdict,margin,tolerance,seed,n,function,", 0) == 0);
}

TEST_CASE("atomic writes land complete files") {
  const std::string path = "/tmp/tracelab_serialize_test.json";
  write_file_atomic(path, "{\"ok\":true}\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "{\"ok\":true}\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_file_atomic("/nonexistent-dir/x.json", "x"), ConfigError);
}

TEST_CASE("identity and selftest serialization") {
  TrialConfig config;
  config.trials = 10;
  config.tuple_size = 3;
  const auto id_result = run_identity_campaign("ibk", config);
  const json j = json::parse(identity_campaign_to_json(id_result));
  CHECK(j["identity"] == "ibk");
  CHECK(j["residuals_ok"].get<bool>());

  config.functions = {"power:4"};
  const std::vector<SelftestResult> selftests = {mutation_selftest("mt1", config)};
  const json s = json::parse(selftest_to_json(selftests));
  CHECK(s["results"][0]["claim"] == "mt1");
  CHECK(s["results"][0]["verdict"] == "FlipDetected");
}
