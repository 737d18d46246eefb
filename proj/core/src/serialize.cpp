#include "tracelab/serialize.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tracelab/version.hpp"

namespace tracelab {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string double_to_hex(double v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, std::bit_cast<std::uint64_t>(v));
  return buf;
}

double double_from_hex(const std::string& hex) {
  return std::bit_cast<double>(static_cast<std::uint64_t>(std::stoull(hex, nullptr, 16)));
}

namespace {

ordered_json hex_array(const std::vector<double>& vs) {
  ordered_json a = ordered_json::array();
  for (double v : vs) a.push_back(double_to_hex(v));
  return a;
}

ordered_json context_to_json(const TrialContext& ctx) {
  ordered_json j;
  j["seed"] = ctx.seed;
  j["dims"] = ctx.dims;
  j["weights"] = ctx.weights;
  j["weights_hex"] = hex_array(ctx.weights);
  j["n"] = ctx.n;
  j["alphas"] = ctx.alphas;
  j["alphas_hex"] = hex_array(ctx.alphas);
  j["function"] = ctx.function;
  return j;
}

ordered_json report_to_json(const InequalityReport& r) {
  ordered_json j;
  j["claim"] = r.claim;
  j["verdict"] = to_string(r.verdict);
  ordered_json sides = ordered_json::array();
  for (const Side& s : r.sides) sides.push_back({{"label", s.label}, {"value", s.value}});
  j["sides"] = std::move(sides);
  ordered_json rels = ordered_json::array();
  for (Relation rel : r.relations) rels.push_back(to_string(rel));
  j["relations"] = std::move(rels);
  j["margin"] = r.margin;
  j["tolerance"] = r.tolerance;
  j["context"] = context_to_json(r.context);
  return j;
}

ordered_json summary_to_json(const ClaimSummary& s) {
  ordered_json j;
  j["claim"] = s.claim;
  j["reports"] = s.reports;
  j["pass"] = s.pass;
  j["violation"] = s.violation;
  j["degenerate"] = s.degenerate;
  if (s.has_min_margin) {
    j["min_margin"] = s.min_margin;
    j["worst"] = context_to_json(s.worst);
  }
  return j;
}

ordered_json element_to_json(const AlgebraElement& x) {
  ordered_json blocks = ordered_json::array();
  for (const Matrix& m : x.blocks()) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      ordered_json row = ordered_json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const Complex v = m(r, c);
        row.push_back({{"re", v.real()},
                       {"im", v.imag()},
                       {"re_hex", double_to_hex(v.real())},
                       {"im_hex", double_to_hex(v.imag())}});
      }
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  return blocks;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string shortest(double v) {
  // json's Grisu2 shortest form, reused for CSV so both formats agree.
  return json(v).dump();
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, const F& fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += fmt(xs[i]);
  }
  return out;
}

ordered_json config_to_json(const RunConfigEcho& echo) {
  ordered_json j;
  j["claims"] = echo.claims;
  j["trials"] = echo.config.trials;
  j["seed"] = echo.config.master_seed;
  ordered_json blocks = ordered_json::array();
  for (const BlockRange& b : echo.config.blocks) {
    blocks.push_back({{"dim_lo", b.dim_lo},
                      {"dim_hi", b.dim_hi},
                      {"weight_lo", b.weight_lo},
                      {"weight_hi", b.weight_hi}});
  }
  j["blocks"] = std::move(blocks);
  j["tuple-size"] = echo.config.tuple_size;
  j["functions"] = echo.config.functions;
  j["p-values"] = echo.config.p_values;
  j["tol-abs"] = echo.config.tol.atol;
  j["tol-rel"] = echo.config.tol.rtol;
  j["threads"] = echo.config.threads;
  j["include-probes"] = echo.include_probes;
  j["format"] = echo.format;
  j["out"] = echo.out_path;
  return j;
}

}  // namespace

std::string campaign_to_json(const CampaignResult& result) {
  ordered_json j;
  j["schema"] = "tracelab-report/1";
  j["tool_version"] = kToolVersion;
  j["rng_version"] = kRngVersion;
  ordered_json reports = ordered_json::array();
  for (const InequalityReport& r : result.reports) reports.push_back(report_to_json(r));
  j["reports"] = std::move(reports);
  ordered_json summaries = ordered_json::array();
  for (const ClaimSummary& s : result.summaries) summaries.push_back(summary_to_json(s));
  j["summaries"] = std::move(summaries);
  return j.dump(2) + "\n";
}

std::string campaign_to_csv(const CampaignResult& result) {
  std::string out =
      "claim,verdict,margin,tolerance,seed,n,function,dims,weights,alphas,sides,relations\n";
  for (const InequalityReport& r : result.reports) {
    const TrialContext& c = r.context;
    out += csv_escape(r.claim);
    out += ',';
    out += to_string(r.verdict);
    out += ',';
    out += shortest(r.margin);
    out += ',';
    out += shortest(r.tolerance);
    out += ',';
    out += std::to_string(c.seed);
    out += ',';
    out += std::to_string(c.n);
    out += ',';
    out += csv_escape(c.function);
    out += ',';
    out += join(c.dims, [](int d) { return std::to_string(d); });
    out += ',';
    out += join(c.weights, [](double w) { return shortest(w); });
    out += ',';
    out += join(c.alphas, [](double a) { return shortest(a); });
    out += ',';
    out += csv_escape(join(r.sides, [](const Side& s) { return s.label + "=" + shortest(s.value); }));
    out += ',';
    out += join(r.relations, [](Relation rel) { return std::string(to_string(rel)); });
    out += '\n';
  }
  return out;
}

std::string manifest_to_json(const RunConfigEcho& echo, const CampaignResult& result,
                             const std::string& started_at, const std::string& finished_at,
                             int exit_code) {
  ordered_json j;
  j["schema"] = "tracelab-manifest/1";
  j["tool_version"] = kToolVersion;
  j["rng_version"] = kRngVersion;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["exit_code"] = exit_code;
  j["config"] = config_to_json(echo);
  ordered_json summaries = ordered_json::array();
  for (const ClaimSummary& s : result.summaries) summaries.push_back(summary_to_json(s));
  j["summaries"] = std::move(summaries);
  return j.dump(2) + "\n";
}

std::string identity_campaign_to_json(const IdentityCampaignResult& result) {
  ordered_json j;
  j["schema"] = "tracelab-identity/1";
  j["tool_version"] = kToolVersion;
  j["rng_version"] = kRngVersion;
  j["identity"] = result.identity;
  j["trials"] = result.records.size();
  j["max_ratio"] = result.max_ratio;
  j["min_perturbed_ratio"] = result.min_perturbed_ratio;
  j["residual_bound"] = kIdentityResidualBound;
  j["mutation_floor"] = kIdentityMutationFloor;
  j["residuals_ok"] = result.residuals_ok;
  j["mutation_ok"] = result.mutation_ok;
  return j.dump(2) + "\n";
}

std::string counterexample_to_json(const FoundInstance& found, bool expected) {
  ordered_json j;
  j["schema"] = "tracelab-counterexample/1";
  j["tool_version"] = kToolVersion;
  j["rng_version"] = kRngVersion;
  j["found"] = true;
  j["expected"] = expected;
  j["dim"] = found.dim;
  j["n"] = found.n;
  j["report"] = report_to_json(found.report);
  ordered_json inputs;
  inputs["alphas"] = found.weights.alphas;
  inputs["alphas_hex"] = hex_array(found.weights.alphas);
  ordered_json xs = ordered_json::array();
  for (const AlgebraElement& x : found.xs) xs.push_back(element_to_json(x));
  inputs["xs"] = std::move(xs);
  ordered_json ys = ordered_json::array();
  for (const AlgebraElement& y : found.ys) ys.push_back(element_to_json(y));
  inputs["ys"] = std::move(ys);
  j["inputs"] = std::move(inputs);
  return j.dump(2) + "\n";
}

std::string no_counterexample_to_json(const CounterexampleQuery& query, bool expected) {
  ordered_json j;
  j["schema"] = "tracelab-counterexample/1";
  j["tool_version"] = kToolVersion;
  j["rng_version"] = kRngVersion;
  j["found"] = false;
  j["expected"] = expected;
  j["claim"] = query.claim;
  j["budget"] = query.budget;
  j["max_dim"] = query.max_dim;
  j["max_n"] = query.max_n;
  return j.dump(2) + "\n";
}

std::string selftest_to_json(const std::vector<SelftestResult>& results) {
  ordered_json arr = ordered_json::array();
  for (const SelftestResult& r : results) {
    ordered_json j;
    j["claim"] = r.claim;
    j["applicable"] = r.applicable;
    j["verdict"] = r.applicable ? (r.violations > 0 ? "FlipDetected" : "FlipMissed")
                                : "NotApplicable";
    j["trials_run"] = r.trials_run;
    j["violations"] = r.violations;
    if (r.first_violation) j["first_violation"] = report_to_json(*r.first_violation);
    arr.push_back(std::move(j));
  }
  ordered_json j;
  j["schema"] = "tracelab-selftest/1";
  j["tool_version"] = kToolVersion;
  j["rng_version"] = kRngVersion;
  j["results"] = std::move(arr);
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace tracelab
