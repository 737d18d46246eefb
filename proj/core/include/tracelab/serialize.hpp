#pragma once

// Report, manifest and counterexample serialization. JSON doubles use the
// shortest round-trip decimal form; contexts additionally carry hex-encoded
// IEEE-754 bit patterns so a run can be replayed from the decimal file
// without any parsing loss. Report files contain no timestamps: the same
// config must produce byte-identical bytes. Timestamps live in the
// manifest, which is written separately.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tracelab/harness.hpp"
#include "tracelab/report.hpp"

namespace tracelab {

/// Hex bit pattern of an IEEE-754 double, e.g. "0x3ff0000000000000".
std::string double_to_hex(double v);
double double_from_hex(const std::string& hex);

struct RunConfigEcho {
  std::vector<std::string> claims;
  TrialConfig config;
  bool include_probes = false;
  std::string format = "json";
  std::string out_path;
};

std::string campaign_to_json(const CampaignResult& result);
std::string campaign_to_csv(const CampaignResult& result);

std::string manifest_to_json(const RunConfigEcho& echo, const CampaignResult& result,
                             const std::string& started_at, const std::string& finished_at,
                             int exit_code);

std::string identity_campaign_to_json(const IdentityCampaignResult& result);

std::string counterexample_to_json(const FoundInstance& found, bool expected);
std::string no_counterexample_to_json(const CounterexampleQuery& query, bool expected);

std::string selftest_to_json(const std::vector<SelftestResult>& results);

/// Writes via a temp file in the same directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace tracelab
