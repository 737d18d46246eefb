// tracelab CLI: seeded verification campaigns over every checked claim,
// counterexample search, and identity residual runs.
//
// Exit codes: 0 = all gated checks pass (or expectation met), 1 = a gated
// Violation/Degenerate (or expectation missed), 2 = usage/config error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracelab/harness.hpp"
#include "tracelab/serialize.hpp"
#include "tracelab/version.hpp"

namespace {

using namespace tracelab;

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    const int lo = std::stoi(s.substr(0, pos));
    const int hi = std::stoi(s.substr(pos + 2));
    if (lo < 1 || hi < lo) throw ConfigError("bad range '" + s + "'");
    return {lo, hi};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("malformed range '" + s + "' (expected a..b)");
  }
}

std::pair<double, double> parse_weight_range(const std::string& s) {
  const auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      const double v = std::stod(s);
      return {v, v};
    }
    const double lo = std::stod(s.substr(0, pos));
    const double hi = std::stod(s.substr(pos + 2));
    if (!(lo > 0.0) || hi < lo) throw ConfigError("bad weight range '" + s + "'");
    return {lo, hi};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("malformed weight range '" + s + "' (expected a..b)");
  }
}

int env_thread_cap() {
  const char* env = std::getenv("TRACELAB_THREADS");
  if (!env || !*env) return 0;
  try {
    return std::max(1, std::stoi(env));
  } catch (const std::exception&) {
    throw ConfigError("TRACELAB_THREADS must be an integer");
  }
}

struct CommonFlags {
  int trials = 200;
  std::uint64_t seed = 0;
  std::string dims = "1..4";
  int blocks = 2;
  std::string weights = "0.25..2";
  std::string p_values;
  std::string functions;
  int tuple_size = 3;
  double tol_abs = 1e-10;
  double tol_rel = 1e-8;
  int threads = 0;  // 0: auto
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--trials", f.trials, "Trials per claim configuration");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--dims", f.dims, "Block dimension range a..b");
  cmd->add_option("--blocks", f.blocks, "Number of blocks per algebra");
  cmd->add_option("--weights", f.weights, "Block weight range a..b");
  cmd->add_option("--p-values", f.p_values, "Comma-separated p list for p-claims");
  cmd->add_option("--functions", f.functions, "Comma-separated function ids");
  cmd->add_option("--tuple-size", f.tuple_size, "Tuple size n");
  cmd->add_option("--tol-abs", f.tol_abs, "Absolute tolerance");
  cmd->add_option("--tol-rel", f.tol_rel, "Relative tolerance");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = auto)");
}

TrialConfig build_config(const CommonFlags& f) {
  TrialConfig config;
  config.master_seed = f.seed;
  config.trials = f.trials;
  const auto [dlo, dhi] = parse_range(f.dims);
  const auto [wlo, whi] = parse_weight_range(f.weights);
  if (f.blocks < 1) throw ConfigError("--blocks must be >= 1");
  config.blocks.assign(static_cast<std::size_t>(f.blocks), BlockRange{dlo, dhi, wlo, whi});
  config.tuple_size = f.tuple_size;
  if (!f.functions.empty()) config.functions = split_list(f.functions);
  if (!f.p_values.empty()) {
    config.p_values.clear();
    for (const std::string& p : split_list(f.p_values)) {
      try {
        config.p_values.push_back(std::stod(p));
      } catch (const std::exception&) {
        throw ConfigError("bad p value '" + p + "'");
      }
    }
  }
  config.tol.atol = f.tol_abs;
  config.tol.rtol = f.tol_rel;
  int threads = f.threads;
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 4));
  }
  const int cap = env_thread_cap();
  if (cap > 0) threads = std::min(threads, cap);
  config.threads = threads;
  return config;
}

// --config JSON uses the flag names as field names; flags given on the
// command line still win because CLI11 only writes bound values for flags
// it actually saw.
void apply_config_file(const std::string& path, CommonFlags& f, std::vector<std::string>& claims,
                       bool& include_probes, std::string& out_path, std::string& format) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("bad JSON in config file: " + std::string(e.what()));
  }
  if (j.contains("claim")) {
    claims.clear();
    if (j["claim"].is_array()) {
      for (const auto& c : j["claim"]) claims.push_back(c.get<std::string>());
    } else {
      claims.push_back(j["claim"].get<std::string>());
    }
  }
  if (j.contains("trials")) f.trials = j["trials"].get<int>();
  if (j.contains("seed")) f.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("dims")) f.dims = j["dims"].get<std::string>();
  if (j.contains("blocks")) f.blocks = j["blocks"].get<int>();
  if (j.contains("weights")) f.weights = j["weights"].get<std::string>();
  if (j.contains("p-values")) {
    if (j["p-values"].is_array()) {
      std::string acc;
      for (const auto& p : j["p-values"]) {
        if (!acc.empty()) acc += ',';
        acc += nlohmann::json(p).dump();
      }
      f.p_values = acc;
    } else {
      f.p_values = j["p-values"].get<std::string>();
    }
  }
  if (j.contains("functions")) {
    if (j["functions"].is_array()) {
      std::string acc;
      for (const auto& fn : j["functions"]) {
        if (!acc.empty()) acc += ',';
        acc += fn.get<std::string>();
      }
      f.functions = acc;
    } else {
      f.functions = j["functions"].get<std::string>();
    }
  }
  if (j.contains("tuple-size")) f.tuple_size = j["tuple-size"].get<int>();
  if (j.contains("tol-abs")) f.tol_abs = j["tol-abs"].get<double>();
  if (j.contains("tol-rel")) f.tol_rel = j["tol-rel"].get<double>();
  if (j.contains("threads")) f.threads = j["threads"].get<int>();
  if (j.contains("include-probes")) include_probes = j["include-probes"].get<bool>();
  if (j.contains("out")) out_path = j["out"].get<std::string>();
  if (j.contains("format")) format = j["format"].get<std::string>();
}

int cmd_verify(const CommonFlags& flags, std::vector<std::string> claims, bool include_probes,
               const std::string& out_path, const std::string& format) {
  const std::string started = iso8601_now();
  if (format != "json" && format != "csv")
    throw ConfigError("--format must be json or csv");

  bool all_mode = false;
  if (claims.empty()) claims = {"all"};
  if (claims.size() == 1 && claims[0] == "all") {
    all_mode = true;
    claims = all_claim_ids();
  }
  const TrialConfig config = build_config(flags);
  for (const std::string& c : claims) (void)is_probe_claim(c);  // validates ids, may throw

  const CampaignResult result = run_campaign(config, claims);

  int gated_failures = 0;
  for (const ClaimSummary& s : result.summaries) {
    const bool gated = !(all_mode && is_probe_claim(s.claim) && !include_probes);
    if (gated) gated_failures += s.violation + s.degenerate;
  }
  const int exit_code = gated_failures > 0 ? 1 : 0;

  const std::string body = format == "json" ? campaign_to_json(result) : campaign_to_csv(result);
  if (out_path.empty()) {
    std::cout << body;
  } else {
    write_file_atomic(out_path, body);
    RunConfigEcho echo{claims, config, include_probes, format, out_path};
    write_file_atomic(out_path + ".manifest.json",
                      manifest_to_json(echo, result, started, iso8601_now(), exit_code));
  }

  for (const ClaimSummary& s : result.summaries) {
    std::fprintf(stderr, "%-16s pass=%-6d violation=%-4d degenerate=%-4d\n", s.claim.c_str(),
                 s.pass, s.violation, s.degenerate);
  }
  return exit_code;
}

int cmd_counterexample(const CommonFlags& flags, const std::string& claim, int budget,
                       int max_dim, int max_n, const std::string& expect,
                       const std::string& out_path) {
  if (expect != "found" && expect != "none")
    throw ConfigError("--expect must be 'found' or 'none'");
  const bool expect_found = expect == "found";
  const TrialConfig config = build_config(flags);
  const CounterexampleQuery query{claim, budget, max_dim, max_n};
  const std::optional<FoundInstance> found = search_counterexample(query, config);

  const std::string body = found ? counterexample_to_json(*found, expect_found)
                                 : no_counterexample_to_json(query, expect_found);
  std::cout << body;
  if (!out_path.empty()) write_file_atomic(out_path, body);
  return found.has_value() == expect_found ? 0 : 1;
}

int cmd_identity(const CommonFlags& flags, const std::string& identity,
                 const std::string& alphas_csv, const std::string& out_path) {
  const TrialConfig config = build_config(flags);
  std::optional<std::vector<double>> alphas;
  if (!alphas_csv.empty()) {
    alphas.emplace();
    for (const std::string& a : split_list(alphas_csv)) {
      try {
        alphas->push_back(std::stod(a));
      } catch (const std::exception&) {
        throw ConfigError("bad alpha '" + a + "'");
      }
    }
  }
  const IdentityCampaignResult result =
      run_identity_campaign(identity, config, alphas ? &*alphas : nullptr);
  const std::string body = identity_campaign_to_json(result);
  std::cout << body;
  if (!out_path.empty()) write_file_atomic(out_path, body);
  std::fprintf(stderr, "%s: max residual/scale = %.3e (bound %.0e)\n", identity.c_str(),
               result.max_ratio, kIdentityResidualBound);
  return result.residuals_ok ? 0 : 1;
}

int cmd_selftest(const CommonFlags& flags, std::vector<std::string> claims,
                 const std::string& out_path) {
  const TrialConfig config = build_config(flags);
  if (claims.empty() || (claims.size() == 1 && claims[0] == "all")) claims = all_claim_ids();
  std::vector<SelftestResult> results;
  bool ok = true;
  for (const std::string& claim : claims) {
    SelftestResult r = mutation_selftest(claim, config);
    if (r.applicable && r.violations == 0) ok = false;
    results.push_back(std::move(r));
  }
  const std::string body = selftest_to_json(results);
  std::cout << body;
  if (!out_path.empty()) write_file_atomic(out_path, body);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tracelab: numerical verification of trace identities and inequalities on "
               "weighted block-trace algebras"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // verify
  CommonFlags vf;
  std::vector<std::string> v_claims;
  bool v_include_probes = false;
  std::string v_out, v_format = "json", v_config;
  CLI::App* verify = app.add_subcommand("verify", "Run verification campaigns");
  verify->add_option("--claim", v_claims, "Claim id or 'all' (repeatable)");
  verify->add_option("--out", v_out, "Report output path");
  verify->add_option("--format", v_format, "json|csv");
  verify->add_option("--config", v_config, "JSON config file (same field names as flags)");
  verify->add_flag("--include-probes", v_include_probes,
                   "Gate probe claims (tl-literal, tl-chain, cor3.4-literal) too");
  add_common_flags(verify, vf);

  // counterexample
  CommonFlags cf;
  std::string c_claim, c_expect = "found", c_out;
  int c_budget = 200, c_max_dim = 3, c_max_n = 4;
  CLI::App* cx = app.add_subcommand("counterexample", "Search for a minimal violating instance");
  cx->add_option("--claim", c_claim, "Claim or identity id")->required();
  cx->add_option("--budget", c_budget, "Trials per (dim, n, configuration) cell");
  cx->add_option("--max-dim", c_max_dim, "Largest block dimension to try");
  cx->add_option("--max-n", c_max_n, "Largest tuple size to try");
  cx->add_option("--expect", c_expect, "found|none");
  cx->add_option("--out", c_out, "Output path");
  add_common_flags(cx, cf);

  // identity
  CommonFlags idf;
  std::string i_id, i_alphas, i_out;
  CLI::App* ident = app.add_subcommand("identity", "Run an identity residual campaign");
  ident->add_option("--identity", i_id, "id1|ibk|mo1|mo2")->required();
  ident->add_option("--alphas", i_alphas, "Fixed comma-separated alphas (validated)");
  ident->add_option("--out", i_out, "Output path");
  add_common_flags(ident, idf);

  // selftest
  CommonFlags sf;
  std::vector<std::string> s_claims;
  std::string s_out;
  CLI::App* self = app.add_subcommand("selftest", "Mutation selftest (flipped directions)");
  self->add_option("--claim", s_claims, "Claim id or 'all' (repeatable)");
  self->add_option("--out", s_out, "Output path");
  add_common_flags(self, sf);

  try {
    // Pre-scan for --config so file values act as defaults under the flags.
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config")
        apply_config_file(argv[i + 1], vf, v_claims, v_include_probes, v_out, v_format);
    }
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (*verify) return cmd_verify(vf, v_claims, v_include_probes, v_out, v_format);
    if (*cx) return cmd_counterexample(cf, c_claim, c_budget, c_max_dim, c_max_n, c_expect, c_out);
    if (*ident) return cmd_identity(idf, i_id, i_alphas, i_out);
    if (*self) return cmd_selftest(sf, s_claims, s_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
